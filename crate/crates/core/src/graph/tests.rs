use super::*;

fn g(name: &str) -> GraphPresentation {
    builtin(name).unwrap()
}

#[test]
fn renewal_resolves_edges() {
    let r = g("renewal");
    assert_eq!(r.resolve_edge(6).unwrap().to_string(), "e6: u4 -> u3");
    assert_eq!(r.resolve_edge(5).unwrap().to_string(), "e5: u1 -> u4");
    assert_eq!(r.resolve_edge(1).unwrap().to_string(), "e1: u1 -> u2");
}

#[test]
fn followers_of_renewal_and_follower_graphs() {
    let r = g("renewal");
    let f3 = r.followers(3).unwrap();
    assert!(f3.is_finite());
    assert_eq!(f3.indices_up_to(&r, 100), vec![4]);
    let f2 = r.followers(2).unwrap();
    assert!(!f2.is_finite());
    assert_eq!(f2.indices_up_to(&r, 9), vec![1, 3, 5, 7, 9]);
    let fol = g("follower");
    for k in [2, 7, 40] {
        assert_eq!(fol.followers(k).unwrap().indices_up_to(&fol, 1000), vec![1]);
    }
}

#[test]
fn text_round_trip_for_builtins() {
    for name in builtin_names() {
        let p = g(name);
        let text = print_graph(&p);
        let q = parse_graph(&text).unwrap();
        assert_eq!(p, q, "{name}");
        assert_eq!(print_graph(&q), text);
    }
}

#[test]
fn parser_accepts_star_and_comments() {
    let p = parse_graph(
        "# renewal written differently\n\
         graph renewal\n\
         family k >= 1: edge e[2*k-1] from u1 to u[k+1]  # odd\n\
         family k >= 1: edge e[2*k] from u[k+1] to u[k]\n",
    )
    .unwrap();
    assert!(p.same_structure(&g("renewal")));
}

#[test]
fn coverage_gap_is_reported() {
    let err = parse_graph("graph bad\nedge e2 from v1 to v1\n").unwrap_err();
    assert_eq!(err, Error::UncoveredIndex(1));
    let err = parse_graph("graph bad\nfamily k >= 1: edge e[2k] from v1 to v1\n").unwrap_err();
    assert_eq!(err, Error::UncoveredIndex(1));
}

#[test]
fn overlaps_are_reported() {
    let err = parse_graph("graph bad\nedge e4 from v1 to v1\nfamily k >= 1: edge e[k] from v1 to v1\n").unwrap_err();
    assert_eq!(err, Error::Overlap(4));
    let err =
        parse_graph("graph bad\nfamily k >= 1: edge e[k] from v1 to v1\nfamily k >= 2: edge e[2k] from v1 to v1\n")
            .unwrap_err();
    assert_eq!(err, Error::Overlap(4));
}

#[test]
fn sinks_are_reported() {
    let err = parse_graph("graph bad\nedge e1 from a to b\n").unwrap_err();
    assert_eq!(err, Error::Sink("b".into()));
    let err =
        parse_graph("graph bad\nedge e1 from v1 to v1\nfamily k >= 2: edge e[k] from v[k+1] to v[k]\n").unwrap_err();
    assert_eq!(err, Error::Sink("v2".into()));
    let err =
        parse_graph("graph bad\nedge e1 from w1 to w1\nfamily k >= 2: edge e[k] from w[2k] to w[2k+1]\n").unwrap_err();
    assert_eq!(err, Error::Sink("w5".into()));
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_graph("graph x\nedge q1 from v1 to v1\n").unwrap_err() {
        Error::Syntax { line, column, .. } => {
            assert_eq!(line, 2);
            assert_eq!(column, 6);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse_graph("edge e1 from v1 to v1\n").unwrap_err(),
        Error::Syntax { .. }
    ));
    assert!(matches!(
        parse_graph("graph x\nfamily k >= 1: edge e[j] from v1 to v1\n").unwrap_err(),
        Error::Syntax { .. }
    ));
}

#[test]
fn finite_presentations() {
    let p = parse_graph("graph two\nedge e1 from a to b\nedge e2 from b to a\n").unwrap();
    assert_eq!(p.max_index(), Some(2));
    let p = parse_graph("graph fin\nfamily k >= 1 to 3: edge e[k] from a to a\nedge e4 from a to a\n").unwrap();
    assert_eq!(p.max_index(), Some(4));
    assert_eq!(p.truncate(9).unwrap().edges.len(), 4);
}

#[test]
fn is_path_reports_the_break() {
    let r = g("renewal");
    assert!(r.is_path(&[1, 2, 1, 2]).is_ok());
    assert!(r.is_path(&[5, 6, 4, 2]).is_ok());
    assert!(matches!(r.is_path(&[1, 1]), Err(Error::InvalidPath(_))));
}

#[test]
fn min_out_edges() {
    let e1 = g("e1var");
    assert_eq!(e1.min_out_edge(&Vertex::indexed("v", 1)), Some(1));
    assert_eq!(e1.min_out_edge(&Vertex::indexed("v", 4)), Some(4));
    assert_eq!(e1.min_out_edge(&Vertex::indexed("v", 5)), Some(5));
    assert_eq!(e1.min_out_edge(&Vertex::indexed("w", 5)), None);
}

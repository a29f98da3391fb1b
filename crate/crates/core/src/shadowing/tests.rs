use super::*;
use crate::dynamics::{complete_path, Chain, PathFamily};
use crate::enumeration::{edge_rank, f_bound, Threshold};
use crate::graph::builtin;
use crate::path::InfinitePath;

fn ip(s: &str) -> InfinitePath {
    s.parse().unwrap()
}

fn bounds() -> SearchBounds {
    SearchBounds::default()
}

/// Chain `y^1, y^2, shift(y^2)` for `lambda^1 = e3 e(2n-1)`, `lambda^2 = e(2n) e4` on e2.
fn e2_chain(n: u64, t_delta: Threshold) -> Chain {
    let g = builtin("e2").unwrap();
    let y1 = complete_path(&g, &[3, 2 * n - 1], None).unwrap();
    let y2 = complete_path(&g, &[2 * n, 4], None).unwrap();
    Chain::finite(vec![y1, y2.clone(), y2.shift()], t_delta)
}

#[test]
fn e2_chain_has_no_shadowing_point() {
    let g = builtin("e2").unwrap();
    let t_eps = edge_rank(&g, 4).unwrap();
    let t_delta = edge_rank(&g, 8).unwrap();
    let c = e2_chain(6, t_delta);
    match search_shadow_point(&g, &c, &t_eps, &bounds()).unwrap() {
        ShadowSearch::NoWitnessWithin { exhaustive, .. } => assert!(exhaustive),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn rose_chain_is_shadowed() {
    let g = builtin("rose").unwrap();
    let c = Chain::finite(
        vec![ip("e1.e2:(e1)"), ip("e2.e7:(e3)"), ip("e7:(e1)")],
        Threshold::from(40u32),
    );
    let t = Threshold::from(7u32);
    match search_shadow_point(&g, &c, &t, &bounds()).unwrap() {
        ShadowSearch::Witness(x) => {
            assert!(crate::dynamics::check_shadowing(&g, &x, &c, &t).unwrap().holds());
            assert_eq!(x.take(2), vec![1, 2]);
            assert!(x.at(3) > f_bound(&g, &t).unwrap());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn e2_finite_instance_fails_exhaustively() {
    let g = builtin("e2").unwrap();
    let t = edge_rank(&g, 4).unwrap();
    let family = PathFamily::new(vec![vec![3, 5], vec![6, 4]]);
    assert_eq!(
        fpc_slots(&g, &family, &t).unwrap(),
        vec![Slot::Exact(3), Slot::Wild, Slot::Exact(4)]
    );
    match check_fpc_instance(&g, &t, &t, &family, &bounds()).unwrap() {
        FpcResult::Failure(r) => {
            assert!(r.exhaustive);
            assert!(!r.junctions_compatible);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn rose_finite_instance_has_witness() {
    let g = builtin("rose").unwrap();
    let t = edge_rank(&g, 2).unwrap();
    let family = PathFamily::new(vec![vec![1, 2, 6], vec![6, 1, 2]]);
    match check_fpc_instance(&g, &t, &t, &family, &bounds()).unwrap() {
        FpcResult::WitnessPath(p) => {
            let e = p.edges().to_vec();
            assert_eq!(e.len(), 5);
            assert_eq!((e[0], e[1], e[3], e[4]), (1, 2, 1, 2));
            assert!(e[2] > 2);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn delta_above_eps_is_rejected() {
    let g = builtin("rose").unwrap();
    let family = PathFamily::new(vec![vec![1, 5], vec![5, 6]]);
    let r = check_fpc_instance(&g, &Threshold::from(10u32), &Threshold::from(5u32), &family, &bounds());
    assert!(r.is_err());
}

#[test]
fn e1var_finite_instance_fails() {
    let g = builtin("e1var").unwrap();
    let family = PathFamily::new(vec![vec![1, 2, 4], vec![5, 3, 1]]);
    let t_delta = edge_rank(&g, 3).unwrap();
    match check_fpc_instance(&g, &Threshold::from(2u32), &t_delta, &family, &bounds()).unwrap() {
        FpcResult::Failure(r) => assert!(r.exhaustive && r.junctions_compatible),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn renewal_periodic_instances_fail() {
    let g = builtin("renewal").unwrap();
    let t = edge_rank(&g, 2).unwrap();
    for (family, compatible) in [(vec![6, 4], true), (vec![5, 6], false)] {
        let fam = PeriodicFamily {
            prefix: vec![],
            period: vec![family],
        };
        match check_ipc1_instance(&g, &t, &t, &fam, &bounds()).unwrap() {
            IpcResult::Failure(r) => {
                assert!(r.exhaustive);
                assert_eq!(r.junctions_compatible, compatible);
                assert!(r.ranking.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[test]
fn line_periodic_instance_has_drifting_witness() {
    let g = builtin("line").unwrap();
    let t = edge_rank(&g, 3).unwrap();
    let fam = PeriodicFamily {
        prefix: vec![],
        period: vec![vec![5, 6]],
    };
    match check_ipc1_instance(&g, &t, &t, &fam, &bounds()).unwrap() {
        IpcResult::WitnessPath(p) => {
            assert_eq!(p.drift(), 1);
            assert!(p.first() > 3);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn tail_only_instance_on_follower_has_witness() {
    let g = builtin("follower").unwrap();
    let t = edge_rank(&g, 2).unwrap();
    let gamma = ip("e5:(e1)");
    match check_ipc2_instance(&g, &t, &t, &PathFamily::new(vec![]), &gamma, &bounds()).unwrap() {
        IpcResult::WitnessPath(p) => {
            assert!(p.first() > f_bound(&g, &t).unwrap());
            assert_eq!(p.cycle(), &[1]);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn e2_tail_instance_fails() {
    let g = builtin("e2").unwrap();
    let t = edge_rank(&g, 4).unwrap();
    let family = PathFamily::new(vec![vec![3, 7]]);
    let gamma = ip("e8:(e4)");
    match check_ipc2_instance(&g, &t, &t, &family, &gamma, &bounds()).unwrap() {
        IpcResult::Failure(r) => assert!(r.exhaustive && !r.junctions_compatible),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn attractors() {
    let b = bounds();
    let found = |name: &str| match find_attractor(&builtin(name).unwrap(), &b).unwrap() {
        AttractorResult::Found { edges, .. } => Some(edges),
        AttractorResult::NotFoundWithin { .. } => None,
    };
    assert_eq!(found("renewal"), Some(vec![1, 2]));
    assert_eq!(found("ef"), Some(vec![1]));
    assert_eq!(found("line"), None);
    assert_eq!(found("rose"), None);
    assert_eq!(found("e2"), None);
    assert_eq!(found("e1var"), None);
}

#[test]
fn ecifs_classes() {
    let k = |name: &str| match classify_ecifs(&builtin(name).unwrap()).unwrap() {
        EcifsVerdict::Yes(ev) => Some(ev.k),
        EcifsVerdict::No(_) => None,
    };
    assert_eq!(k("follower"), Some(1));
    for name in ["rose", "line", "renewal", "e2", "ef", "e1var"] {
        assert_eq!(k(name), None, "{name}");
    }
}

#[test]
fn wandering_classes() {
    let b = bounds();
    for (name, expected) in [
        ("line", Some(true)),
        ("rose", Some(false)),
        ("renewal", Some(false)),
        ("follower", Some(false)),
        ("e2", Some(false)),
        ("ef", Some(false)),
        ("e1var", Some(false)),
    ] {
        let g = builtin(name).unwrap();
        let got = match classify_wandering(&g, &b).unwrap() {
            WanderingVerdict::Yes => Some(true),
            WanderingVerdict::No(c) => {
                assert!(verify_wandering(&g, &c).unwrap(), "{name}");
                Some(false)
            }
            WanderingVerdict::Unknown(_) => None,
        };
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn self_chaining_counterexample_on_renewal() {
    let g = builtin("renewal").unwrap();
    let WanderingVerdict::No(c) = classify_wandering(&g, &bounds()).unwrap() else {
        panic!("renewal is not wandering");
    };
    assert_eq!(
        c.shape,
        WitnessShape::SelfChaining {
            family: 1,
            start: 1,
            step: 1,
            end_edge: 1
        }
    );
    assert_eq!(c.samples[2], vec![6, 4, 2, 1]);
}

#[test]
fn verdict_table() {
    use Answer::*;
    let table = [
        ("rose", Yes, Yes),
        ("line", Yes, Yes),
        ("follower", Yes, Yes),
        ("renewal", Unknown, No),
        ("e2", No, No),
        ("ef", Yes, No),
        ("e1var", No, No),
    ];
    for (name, finite, full) in table {
        let g = builtin(name).unwrap();
        let (f, s) = decide_shadowing(&g, &bounds()).unwrap();
        assert_eq!((f.answer, s.answer), (finite, full), "{name}");
        assert!(verify_certificate(&g, &f.certificate).unwrap(), "{name} finite");
        assert!(verify_certificate(&g, &s.certificate).unwrap(), "{name} full");
    }
    let (_, s) = decide_shadowing(&builtin("renewal").unwrap(), &bounds()).unwrap();
    assert_eq!(s.rule, Rule::AttractorNotEcifs);
    let (f, _) = decide_shadowing(&builtin("follower").unwrap(), &bounds()).unwrap();
    assert_eq!(f.rule, Rule::Ecifs);
    let (f, _) = decide_shadowing(&builtin("line").unwrap(), &bounds()).unwrap();
    assert_eq!(f.rule, Rule::Wandering);
}

#[test]
fn certificates_survive_json() {
    for name in crate::graph::builtin_names() {
        let g = builtin(name).unwrap();
        let (f, s) = decide_shadowing(&g, &bounds()).unwrap();
        for v in [f, s] {
            let text = serde_json::to_string(&v.to_json()).unwrap();
            let back = Verdict::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, v, "{name}");
        }
    }
}

#[test]
fn tampered_witness_is_rejected() {
    let g = builtin("rose").unwrap();
    let c = Chain::finite(
        vec![ip("e1.e2:(e1)"), ip("e2.e7:(e3)"), ip("e7:(e1)")],
        Threshold::from(40u32),
    );
    let t = Threshold::from(7u32);
    let ShadowSearch::Witness(point) = search_shadow_point(&g, &c, &t, &bounds()).unwrap() else {
        panic!("expected a witness");
    };
    let good = Certificate::ShadowWitness {
        eps_exp: t.clone(),
        chain: c.clone(),
        point: point.clone(),
    };
    assert!(verify_certificate(&g, &good).unwrap());
    let bad = Certificate::ShadowWitness {
        eps_exp: t,
        chain: c,
        point: ip("e2.e2:(e1)"),
    };
    assert!(!verify_certificate(&g, &bad).unwrap());
}

#[test]
fn tampered_classifier_evidence_is_rejected() {
    let g = builtin("follower").unwrap();
    let (f, _) = decide_shadowing(&g, &bounds()).unwrap();
    let Certificate::ClassifierEvidence {
        evidence: Evidence::Ecifs(mut ev),
    } = f.certificate
    else {
        panic!("expected ECIFS evidence");
    };
    ev.k += 1;
    let bad = Certificate::ClassifierEvidence {
        evidence: Evidence::Ecifs(ev),
    };
    assert!(!verify_certificate(&g, &bad).unwrap());
    let other = builtin("rose").unwrap();
    assert!(!verify_certificate(&other, &f_cert_for("follower")).unwrap());
}

fn f_cert_for(name: &str) -> Certificate {
    decide_shadowing(&builtin(name).unwrap(), &bounds())
        .unwrap()
        .0
        .certificate
}

#[test]
fn finite_graph_verdict() {
    let g = crate::graph::parse_graph("graph two\nedge e1 from a to b\nedge e2 from b to a\n").unwrap();
    let (f, s) = decide_shadowing(&g, &bounds()).unwrap();
    assert_eq!((f.rule, s.rule), (Rule::FiniteGraph, Rule::FiniteGraph));
    assert!(verify_certificate(&g, &f.certificate).unwrap());
}

#[test]
fn zero_bounds_are_rejected() {
    let g = builtin("rose").unwrap();
    let b = SearchBounds {
        max_path_len: 0,
        ..SearchBounds::default()
    };
    assert!(decide_shadowing(&g, &b).is_err());
}

#[test]
fn periodic_family_literals_round_trip() {
    let f = PeriodicFamily::parse("e1.e2 | period: e6.e4; e5.e6").unwrap();
    assert_eq!(f.prefix, vec![vec![1, 2]]);
    assert_eq!(f.period, vec![vec![6, 4], vec![5, 6]]);
    assert_eq!(PeriodicFamily::parse(&f.literal()).unwrap(), f);
    let bare = PeriodicFamily::parse("| period: e6.e4").unwrap();
    assert!(bare.prefix.is_empty());
    assert_eq!(bare.literal(), "| period: e6.e4");
    assert!(PeriodicFamily::parse("e6.e4").is_err());
    assert!(PeriodicFamily::parse("e1.e2 | period:").is_err());
}

#[test]
fn expected_table_covers_every_builtin_in_order() {
    let names: Vec<&str> = expected_verdicts().iter().map(|r| r.name).collect();
    assert_eq!(names, crate::graph::builtin_names());
}

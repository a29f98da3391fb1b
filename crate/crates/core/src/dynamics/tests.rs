use super::*;
use crate::graph::builtin;
use num_bigint::BigUint;

fn ip(s: &str) -> InfinitePath {
    s.parse().unwrap()
}

#[test]
fn f_index_examples() {
    let lengths = [2, 3, 4];
    assert_eq!(f_index(&lengths, 3, 2).unwrap(), 5);
    assert_eq!(f_index(&lengths, 3, 4).unwrap(), 7);
    assert_eq!(f_index(&lengths, 1, 1).unwrap(), 1);
    assert!(f_index(&lengths, 1, 2).is_err());
    assert!(f_index(&lengths, 3, 5).is_err());
    for j in 1..=7 {
        let (i, n) = f_inverse(&lengths, j).unwrap();
        assert_eq!(f_index(&lengths, i, n).unwrap(), j);
    }
    assert!(f_inverse(&lengths, 8).is_err());
}

#[test]
fn rose_family_chain_is_valid_and_shadowed() {
    let g = builtin("rose").unwrap();
    let t = nk(&g, 2).unwrap();
    let family = PathFamily::new(vec![vec![1, 5], vec![6, 2, 7], vec![8, 1]]);
    let ext = default_extensions(&g, &family).unwrap();
    let c = chain_from_family(&g, &family, &ext, &t).unwrap();
    assert_eq!(c.elements.len(), 5);
    assert!(validate_chain(&g, &c).unwrap().is_valid());
    assert!(!c.is_linked());
    assert!(construct_shadow_finite(&g, &c, 2).is_err());
}

#[test]
fn linked_finite_chain_is_shadowed() {
    let g = builtin("rose").unwrap();
    let t = nk(&g, 2).unwrap();
    let c = Chain::finite(
        vec![
            ip("e1.e2.e5:(e1)"),
            ip("e2.e6.e3:(e2)"),
            ip("e6.e9:(e1)"),
            ip("e9.e2:(e2)"),
        ],
        t.clone(),
    );
    assert!(c.is_linked());
    assert!(validate_chain(&g, &c).unwrap().is_valid());
    let x = construct_shadow_finite(&g, &c, 2).unwrap();
    assert_eq!(x.take(6), vec![1, 2, 6, 9, 1, 1]);
    assert!(check_shadowing(&g, &x, &c, &t).unwrap().holds());
}

#[test]
fn e2_family_fails_at_the_junction() {
    let g = builtin("e2").unwrap();
    let t = BigUint::from(20u32);
    let n = 12;
    let family = PathFamily::new(vec![vec![3, 2 * n - 1], vec![2 * n, 4]]);
    let ext = default_extensions(&g, &family).unwrap();
    let err = chain_from_family(&g, &family, &ext, &t).unwrap_err();
    assert!(
        matches!(err, Error::Precondition(ref m) if m.contains("junction 1")),
        "{err}"
    );
}

#[test]
fn family_condition_rejects_stray_large_edges() {
    let g = builtin("rose").unwrap();
    let t = nk(&g, 2).unwrap();
    let family = PathFamily::new(vec![vec![1, 9, 5], vec![6, 2]]);
    assert!(check_family_conditions(&g, &family, &t, FamilyKind::Finite).is_err());
    let short = PathFamily::new(vec![vec![1], vec![6, 2]]);
    assert!(check_family_conditions(&g, &short, &t, FamilyKind::Finite).is_err());
}

#[test]
fn family_and_tail_chain() {
    let g = builtin("rose").unwrap();
    let t = nk(&g, 2).unwrap();
    let family = PathFamily::new(vec![vec![1, 5], vec![6, 7]]);
    let gamma = ip("e9:(e1)");
    let ext = default_extensions(&g, &family).unwrap();
    let c = chain_from_family_and_tail(&g, &family, &gamma, &ext, &t).unwrap();
    assert!(validate_chain(&g, &c).unwrap().is_valid());
    assert_eq!(c.element(3), Some(gamma.clone()));
    assert_eq!(c.element(5), Some(gamma.shift_by(2)));
}

#[test]
fn completion_closes_cycles_and_drifts() {
    let line = builtin("line").unwrap();
    let x = complete_path(&line, &[3], None).unwrap();
    assert_eq!(x, ip(":(e3)+1"));
    let e1 = builtin("e1var").unwrap();
    let x = complete_path(&e1, &[1], None).unwrap();
    assert_eq!(x, ip("e1:(e2)+2"));
    let ren = builtin("renewal").unwrap();
    let x = complete_path(&ren, &[7], None).unwrap();
    assert_eq!(x.take(6), vec![7, 8, 6, 4, 2, 1]);
    assert!(x.validate(&ren).is_ok());
}

#[test]
fn infinite_chain_shadow_by_first_symbols() {
    let g = builtin("line").unwrap();
    let t = nk(&g, 2).unwrap();
    let gamma = ip(":(e4)+1");
    let c = Chain {
        elements: vec![ip(":(e2)+1"), ip(":(e3)+1")],
        tail: Some(ChainTail::Orbit(gamma)),
        threshold: t.clone(),
    };
    assert!(validate_chain(&g, &c).unwrap().is_valid());
    let x = construct_shadow_infinite(&g, &c, 2).unwrap();
    assert_eq!(x, ip(":(e2)+1"));
    assert!(check_shadowing(&g, &x, &c, &t).unwrap().holds());
}

#[test]
fn periodic_tail_chain_on_the_rose() {
    let g = builtin("rose").unwrap();
    let t = nk(&g, 1).unwrap();
    let a = ip(":(e1.e2)");
    let b = a.shift();
    let c = Chain {
        elements: vec![],
        tail: Some(ChainTail::Cycle(vec![a.clone(), b])),
        threshold: t.clone(),
    };
    assert!(validate_chain(&g, &c).unwrap().is_valid());
    let x = construct_shadow_infinite(&g, &c, 1).unwrap();
    assert_eq!(x, a);
    assert!(check_shadowing(&g, &x, &c, &t).unwrap().holds());
}

#[test]
fn chain_literals_round_trip() {
    let t = BigUint::from(7u32);
    for text in [
        "e1:(e2); e2:(e1)",
        "e2:(e1) | tail: orbit e1.e2:(e3)",
        "e3:(e1) | tail: cycle :(e1); :(e2)",
        "| tail: orbit :(e4.e5)",
    ] {
        let c = Chain::parse(text, t.clone()).unwrap();
        assert_eq!(c.literal(), text);
        assert_eq!(Chain::parse(&c.literal(), t.clone()).unwrap(), c);
    }
    let c = Chain::parse("e1:(e1) | tail: orbit e2:(e2)", t.clone()).unwrap();
    assert_eq!(c.tail, Some(ChainTail::Orbit(":(e2)".parse().unwrap())));
    for bad in [
        "",
        "e1:(e1) | orbit :(e1)",
        "e1:(e1) | tail: spiral :(e1)",
        "e1:(e1) | tail: cycle",
        "e1.e2",
    ] {
        assert!(Chain::parse(bad, t.clone()).is_err(), "{bad}");
    }
}

#[test]
fn family_literals_round_trip() {
    let f = PathFamily::parse("e3.e1; e2.e4.e1").unwrap();
    assert_eq!(f.paths, vec![vec![3, 1], vec![2, 4, 1]]);
    assert_eq!(PathFamily::parse(&f.literal()).unwrap(), f);
    assert!(PathFamily::parse("v1; e2").is_err());
    assert!(PathFamily::parse("e0").is_err());
}

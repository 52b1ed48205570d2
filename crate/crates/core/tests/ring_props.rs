use proptest::prelude::*;
use zsring::family::supported_rings;
use zsring::syntax::parse_ring_spec;
use zsring::{full_aut, Elem, Error, FiniteRing};

fn rings(max: u64) -> Vec<FiniteRing> {
    supported_rings(max).iter().map(|d| FiniteRing::build(d).unwrap()).collect()
}

fn ring_and_elems(max: u64, k: usize) -> impl Strategy<Value = (FiniteRing, Vec<Elem>)> {
    prop::sample::select(rings(max)).prop_flat_map(move |r| {
        let n = r.order() as u32;
        (Just(r), prop::collection::vec((0..n).prop_map(Elem), k))
    })
}

proptest! {
    #[test]
    fn ring_axioms((r, e) in ring_and_elems(64, 3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.add(a, r.zero()), a);
        prop_assert_eq!(r.mul(a, r.one()), a);
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.sub(r.add(a, b), b), a);
    }

    #[test]
    fn units_and_idempotents((r, e) in ring_and_elems(64, 2)) {
        let (a, b) = (e[0], e[1]);
        let has_inverse = r.elements().any(|x| r.mul(a, x) == r.one());
        prop_assert_eq!(r.is_unit(a), has_inverse);
        prop_assert_eq!(r.is_idempotent(a), r.mul(a, a) == a);
        prop_assert_eq!(r.is_unit(r.mul(a, b)), r.is_unit(a) && r.is_unit(b));
        prop_assert_eq!(r.decode(a).len(), r.factors().len());
        prop_assert_eq!(r.encode(&r.decode(a)), a);
    }

    #[test]
    fn parser_is_total(text in "\\PC{0,24}") {
        match parse_ring_spec(&text) {
            Ok(ast) => {
                let printed = ast.to_string();
                prop_assert_eq!(parse_ring_spec(&printed).unwrap().to_string(), printed);
            }
            Err(Error::Syntax { offset, .. }) => prop_assert!(offset <= text.len()),
            Err(_) => {}
        }
    }

    #[test]
    fn parser_on_near_grammar(text in "[ZGF/()\\[\\]x^0-9 ]{0,24}") {
        if let Err(Error::Syntax { offset, .. }) = parse_ring_spec(&text) {
            prop_assert!(offset <= text.len());
        }
        let _ = FiniteRing::from_spec(&text);
    }

    #[test]
    fn specs_round_trip(parts in prop::collection::vec((0u8..3, prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27]), 1u32..4), 1..4)) {
        let text: Vec<String> = parts
            .iter()
            .map(|&(kind, n, k)| match kind {
                0 => format!("Z/{n}"),
                1 => format!("GF({n})"),
                _ => format!("GF({n})[x]/x^{k}"),
            })
            .collect();
        let text = text.join(" x ");
        let ast = parse_ring_spec(&text).unwrap();
        prop_assert_eq!(ast.to_string(), text.clone());
        let spaced: String = text.chars().flat_map(|c| [c, ' ']).collect();
        prop_assert_eq!(parse_ring_spec(&spaced).unwrap().to_string(), text);
    }
}

#[test]
fn parse_examples() {
    let r = FiniteRing::from_spec("Z/12").unwrap();
    assert_eq!(r.canonical_spec(), "Z/4 x Z/3");
    assert_eq!(parse_ring_spec("GF(4) x GF(4)").unwrap().factors.len(), 2);
    assert!(matches!(parse_ring_spec("Z/0"), Err(Error::Syntax { offset: 2, .. })));
    assert!(FiniteRing::from_spec("Z/1").is_err());
    assert!(FiniteRing::from_spec("GF(6)").is_err());
}

/// Every automorphism found passes the literal permutation checks.
#[test]
fn automorphisms_are_ring_automorphisms() {
    for r in rings(64) {
        let g = full_aut(&r).unwrap();
        assert!(g.verify_group_axioms(), "{}", r.label());
        for a in g.elements() {
            let mut seen = vec![false; r.order()];
            for x in r.elements() {
                assert!(!std::mem::replace(&mut seen[a.apply(x).index()], true));
            }
            assert_eq!(a.apply(r.one()), r.one());
            for x in r.elements() {
                for y in r.elements() {
                    assert_eq!(a.apply(r.add(x, y)), r.add(a.apply(x), a.apply(y)));
                    assert_eq!(a.apply(r.mul(x, y)), r.mul(a.apply(x), a.apply(y)));
                }
            }
        }
    }
}

/// Counts automorphisms by assigning images to an additive generating set.
fn brute_force_aut_count(r: &FiniteRing) -> usize {
    let mut gens = Vec::new();
    let mut span = r.additive_closure([]);
    for x in r.elements() {
        if !span.contains(x.index()) {
            gens.push(x);
            span = r.additive_closure(gens.iter().copied());
        }
    }
    // every element as a sum c_1 g_1 + ... with 0 <= c_i < additive order
    let order = |g: Elem| (1..).find(|&k| (0..k).fold(r.zero(), |s, _| r.add(s, g)) == r.zero()).unwrap();
    let orders: Vec<usize> = gens.iter().map(|&g| order(g)).collect();
    let combine = |imgs: &[Elem], coeffs: &[usize]| {
        let mut s = r.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            for _ in 0..c {
                s = r.add(s, imgs[i]);
            }
        }
        s
    };
    let mut coords: Vec<Vec<usize>> = vec![vec![0]];
    for &o in &orders {
        coords = coords.into_iter().flat_map(|c| (0..o).map(move |k| [c.clone(), vec![k]].concat())).collect();
    }
    let coords: Vec<Vec<usize>> = coords.into_iter().map(|c| c[1..].to_vec()).collect();
    let n = r.order() as u32;
    let mut count = 0;
    let mut imgs = vec![r.zero(); gens.len()];
    let mut idx = vec![0u32; gens.len()];
    'outer: loop {
        for (i, &k) in idx.iter().enumerate() {
            imgs[i] = Elem(k);
        }
        let mut map = vec![None; r.order()];
        let mut ok = true;
        for c in &coords {
            let x = combine(&gens, c).index();
            let y = combine(&imgs, c);
            match map[x] {
                None => map[x] = Some(y),
                Some(z) if z == y => {}
                Some(_) => ok = false,
            }
        }
        if ok {
            let map: Vec<Elem> = map.into_iter().map(Option::unwrap).collect();
            let mut hit = vec![false; r.order()];
            ok = map.iter().all(|y| !std::mem::replace(&mut hit[y.index()], true))
                && map[r.one().index()] == r.one()
                && r.elements().all(|x| r.elements().all(|y| map[r.mul(x, y).index()] == r.mul(map[x.index()], map[y.index()])));
            if ok {
                count += 1;
            }
        }
        for d in idx.iter_mut() {
            *d += 1;
            if *d < n {
                continue 'outer;
            }
            *d = 0;
        }
        break;
    }
    count
}

#[test]
fn automorphism_groups_are_complete() {
    for r in rings(16) {
        assert_eq!(full_aut(&r).unwrap().len(), brute_force_aut_count(&r), "{}", r.label());
    }
}

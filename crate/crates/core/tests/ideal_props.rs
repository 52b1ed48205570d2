use zsring::family::supported_rings;
use zsring::witness::{gp_set, Structure};
use zsring::{full_aut, FiniteRing, WeightGroup};

fn rings(max: u64) -> Vec<FiniteRing> {
    supported_rings(max).iter().map(|d| FiniteRing::build(d).unwrap()).collect()
}

fn closed(r: &FiniteRing, members: &zsring::ElemSet) -> bool {
    let elems: Vec<_> = members.iter().map(|i| zsring::Elem(i as u32)).collect();
    members.contains(r.zero().index())
        && elems.iter().all(|&a| elems.iter().all(|&b| members.contains(r.add(a, b).index())))
        && elems.iter().all(|&a| r.elements().all(|x| members.contains(r.mul(a, x).index())))
}

#[test]
fn prime_ideals_and_indices() {
    for r in rings(64) {
        let primes = r.prime_ideals().unwrap();
        assert_eq!(primes.len(), r.factors().len(), "{}", r.label());
        for p in &primes {
            assert!(closed(&r, p.ideal.members()));
            assert!(r.is_prime_ideal(&p.ideal));
            let ind = p.index;
            assert_eq!(r.ideal_power(&p.ideal, ind).unwrap(), r.ideal_power(&p.ideal, ind + 1).unwrap());
            if ind >= 2 {
                assert_ne!(r.ideal_power(&p.ideal, ind - 1).unwrap(), r.ideal_power(&p.ideal, ind).unwrap());
            }
            assert_eq!(r.ideal_index(&p.ideal).unwrap(), ind);
            assert_eq!(p.power(ind), p.power_at_index());
            for t in 0..=ind + 1 {
                assert!(closed(&r, p.power(t).members()));
            }
        }
        for (i, p) in primes.iter().enumerate() {
            for q in &primes[i + 1..] {
                let sum = r.ideal_sum(p.power_at_index(), q.power_at_index()).unwrap();
                assert_eq!(sum, r.unit_ideal());
            }
        }
        for x in r.elements() {
            assert_eq!(r.is_unit(x), primes.iter().all(|p| !p.ideal.contains(x)));
        }
    }
}

#[test]
fn ideal_operations() {
    for r in rings(32) {
        for a in r.elements() {
            let i = r.principal_ideal(a);
            assert!(closed(&r, i.members()));
            assert_eq!(r.ideal_generated(&r.ideal_generators(&i)), i);
            for b in r.elements().step_by(3) {
                let j = r.principal_ideal(b);
                let sum = r.ideal_sum(&i, &j).unwrap();
                let prod = r.ideal_product(&i, &j).unwrap();
                assert!(closed(&r, sum.members()) && closed(&r, prod.members()));
                assert!(i.is_subset(&sum) && j.is_subset(&sum));
                assert!(prod.is_subset(&i) && prod.is_subset(&j));
                assert_eq!(prod, r.principal_ideal(r.mul(a, b)));
            }
        }
    }
}

/// G_P generates P modulo P^Ind and orbits partition the primes.
#[test]
fn generator_sets_and_orbits() {
    for r in rings(64) {
        for group in [WeightGroup::trivial(&r), full_aut(&r).unwrap()] {
            let s = Structure::new(&r, &group).unwrap();
            let mut seen: Vec<usize> = s.orbits.iter().flat_map(|o| o.primes.clone()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..s.primes.len()).collect::<Vec<_>>());
            for o in &s.orbits {
                assert_eq!(o.size * o.stabilizer_size, group.len());
                assert_eq!(o.primes.len(), o.size);
            }
        }
        for p in r.prime_ideals().unwrap() {
            let gp = gp_set(&r, &p).unwrap();
            assert!(!gp.is_empty());
            for c in r.elements() {
                let generates = p.ideal.contains(c) && r.ideal_sum(&r.principal_ideal(c), p.power_at_index()).unwrap() == p.ideal;
                assert_eq!(gp.contains(c.index()), generates, "{}", r.label());
            }
        }
    }
}

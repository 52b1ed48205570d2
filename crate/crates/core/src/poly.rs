//! Dense polynomials over a prime field, little-endian coefficient vectors.

pub type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo a monic `m` over GF(p).
pub fn rem(p: u32, a: &[u32], m: &[u32]) -> Poly {
    let dm = degree(m).expect("nonzero modulus");
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    while let Some(dr) = r.iter().rposition(|&c| c % p != 0) {
        if dr < dm {
            break;
        }
        let lead = r[dr] % p;
        let shift = dr - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * c as u64) % p;
        }
    }
    trim(r.into_iter().map(|c| (c % p) as u32).collect())
}

pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Decodes a base-`p` integer into a coefficient vector of length `len`.
pub fn from_index(p: u32, mut idx: u64, len: usize) -> Poly {
    (0..len)
        .map(|_| {
            let c = (idx % p as u64) as u32;
            idx /= p as u64;
            c
        })
        .collect()
}

pub fn to_index(p: u32, a: &[u32]) -> u64 {
    a.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2` divides `m`.
pub fn is_irreducible(p: u32, m: &[u32]) -> bool {
    let Some(d) = degree(m) else { return false };
    if d == 0 {
        return false;
    }
    for fd in 1..=d / 2 {
        let count = (p as u64).pow(fd as u32);
        for low in 0..count {
            let mut f = from_index(p, low, fd);
            f.push(1);
            if rem(p, m, &f).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `e` whose lower coefficients, read as a base-`p`
/// integer, are smallest.
pub fn smallest_irreducible(p: u32, e: u32) -> Poly {
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut f = from_index(p, low, e as usize);
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub fn render(a: &[u32], var: &str) -> String {
    let terms: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, c) => format!("{c}{var}"),
            (i, 1) => format!("{var}^{i}"),
            (i, c) => format!("{c}{var}^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_over_gf2() {
        assert!(is_irreducible(2, &[1, 1, 1]));
        assert!(!is_irreducible(2, &[1, 0, 1])); // (x+1)^2
        assert!(is_irreducible(2, &[1, 1, 0, 1]));
        assert!(!is_irreducible(2, &[0, 1, 1]));
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn remainder_and_render() {
        // x^2 mod x^2+x+1 over GF(2) is x+1
        assert_eq!(rem(2, &[0, 0, 1], &[1, 1, 1]), vec![1, 1]);
        assert_eq!(render(&[1, 1], "x"), "1+x");
        assert_eq!(render(&[0, 2, 0, 1], "x"), "2x+x^3");
        assert_eq!(to_index(3, &from_index(3, 17, 3)), 17);
    }
}

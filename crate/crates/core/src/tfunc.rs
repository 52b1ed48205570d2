//! `T(m; h)`: the largest `Σ t_i` over nonnegative profiles with
//! `Σ_{i<=d} i·t_i < d·m` for every `d = 1..=h`.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TProfile {
    pub m: u32,
    pub h: u32,
    /// `t_1, …, t_h`.
    pub profile: Vec<u32>,
    pub value: u32,
}

/// Checks the prefix constraints for every `d = 1..=h`.
pub fn satisfies_prefix_bound(m: u32, profile: &[u32]) -> bool {
    let mut weighted = 0u64;
    for (i, &t) in profile.iter().enumerate() {
        let d = i as u64 + 1;
        weighted += d * t as u64;
        if weighted >= d * m as u64 {
            return false;
        }
    }
    true
}

/// Greedy recurrence: `t_1 = m - 1`, then each `t_d` as large as the `d`-th
/// constraint allows given the earlier terms.
pub fn t_function(m: u32, h: u32) -> TProfile {
    assert!(m >= 1 && h >= 1, "t_function needs m, h >= 1");
    let mut profile = Vec::with_capacity(h as usize);
    let mut weighted: i64 = 0;
    for d in 1..=h as i64 {
        let t = if d == 1 { m as i64 - 1 } else { ((d * m as i64 - 1) - weighted).div_euclid(d) };
        let t = t.max(0);
        weighted += d * t;
        profile.push(t as u32);
    }
    let value = profile.iter().sum();
    TProfile { m, h, profile, value }
}

/// Exhaustive maximum over all feasible profiles. Each `t_d` ranges over
/// `0..=min(m, slack_d)` where `slack_d` comes from the `d`-th prefix constraint.
pub fn t_function_bruteforce(m: u32, h: u32) -> u32 {
    fn go(m: i64, h: i64, d: i64, weighted: i64, sum: u32, best: &mut u32) {
        if d > h {
            *best = (*best).max(sum);
            return;
        }
        let slack = d * m - 1 - weighted;
        if slack < 0 {
            return;
        }
        let top = (slack / d).min(m);
        for t in 0..=top {
            go(m, h, d + 1, weighted + d * t, sum + t as u32, best);
        }
    }
    let mut best = 0;
    go(m as i64, h as i64, 1, 0, 0, &mut best);
    best
}

/// A profile with every entry at least one, summing to `T(m; h)` and meeting the
/// prefix constraints, if one exists.
pub fn positive_profile(m: u32, h: u32) -> Option<Vec<u32>> {
    let target = t_function(m, h).value;
    fn go(m: i64, h: i64, d: i64, weighted: i64, left: i64, acc: &mut Vec<u32>) -> bool {
        if d > h {
            return left == 0;
        }
        let slack = d * m - 1 - weighted;
        let remaining_slots = h - d;
        let top = (slack / d).min(left - remaining_slots);
        for t in (1..=top).rev() {
            acc.push(t as u32);
            if go(m, h, d + 1, weighted + d * t, left - t, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    go(m as i64, h as i64, 1, 0, target as i64, &mut acc).then_some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_examples() {
        assert_eq!(t_function(1, 5).profile, vec![0; 5]);
        assert_eq!(t_function(1, 5).value, 0);
        assert_eq!(t_function(2, 2).profile, vec![1, 1]);
        assert_eq!(t_function(3, 2).profile, vec![2, 1]);
        assert_eq!(t_function(3, 2).value, 3);
        assert_eq!(t_function(2, 3).profile, vec![1, 1, 0]);
    }

    #[test]
    fn bruteforce_examples() {
        for h in 1..=8 {
            assert_eq!(t_function_bruteforce(1, h), 0);
        }
        for m in 1..=8 {
            assert_eq!(t_function_bruteforce(m, 1), m - 1);
        }
        assert_eq!(t_function_bruteforce(2, 3), 2);
        assert_eq!(t_function_bruteforce(2, 2), 2);
        assert_eq!(t_function_bruteforce(3, 2), 3);
    }

    #[test]
    fn positive_profiles() {
        assert_eq!(positive_profile(2, 3), None);
        assert_eq!(positive_profile(2, 2), Some(vec![1, 1]));
        assert_eq!(positive_profile(1, 1), None);
        let p = positive_profile(4, 3).unwrap();
        assert!(satisfies_prefix_bound(4, &p));
        assert_eq!(p.iter().sum::<u32>(), t_function(4, 3).value);
    }
}

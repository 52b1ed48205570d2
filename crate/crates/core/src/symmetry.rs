//! Automorphisms of a finite commutative multiplication table that fix a target
//! set and respect a family of image sets.
//!
//! A permutation `σ` with `σ(xy) = σ(x)σ(y)`, `σ(target) = target` and
//! `σ(images[a]) = images[σ(a)]` maps free multisets to free multisets and
//! achievable sets to achievable sets, so the search may identify states in the
//! same orbit.

/// Finds automorphisms by assigning images to a generating set, propagating the
/// assignment through products and checking consistency as it goes. Stops after
/// `limit` permutations (the identity is always first).
pub(crate) fn table_automorphisms(n: usize, mul: &[u16], target: &[bool], images: &[Vec<u16>], limit: usize) -> Vec<Vec<u16>> {
    let gens = generators(n, mul);
    let sig: Vec<Signature> = (0..n).map(|x| signature(n, mul, target, images, x)).collect();
    let mut st = State {
        n,
        mul,
        target,
        images,
        gens: &gens,
        sig: &sig,
        map: vec![NONE; n],
        inv: vec![NONE; n],
        found: vec![(0..n as u16).collect()],
        limit,
    };
    st.assign(0);
    st.found.sort();
    st.found
}

const NONE: u16 = u16::MAX;

#[derive(PartialEq, Eq)]
struct Signature {
    in_target: bool,
    tail: u16,
    cycle: u16,
    image_count: usize,
    /// `|{y : xy = x}|`
    stabilizers: usize,
    /// `|{y : y² = x}|`
    roots: usize,
}

fn signature(n: usize, mul: &[u16], target: &[bool], images: &[Vec<u16>], x: usize) -> Signature {
    let mut seen = vec![NONE; n];
    let mut p = x;
    let mut k = 0u16;
    while seen[p] == NONE {
        seen[p] = k;
        p = mul[p * n + x] as usize;
        k += 1;
    }
    Signature {
        in_target: target[x],
        tail: seen[p],
        cycle: k - seen[p],
        image_count: images[x].len(),
        stabilizers: (0..n).filter(|&y| mul[x * n + y] as usize == x).count(),
        roots: (0..n).filter(|&y| mul[y * n + y] as usize == x).count(),
    }
}

/// Greedy generating set: repeatedly adds the least element not yet generated.
fn generators(n: usize, mul: &[u16]) -> Vec<usize> {
    let mut inside = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    while let Some(g) = (0..n).find(|&x| !inside[x]) {
        gens.push(g);
        inside[g] = true;
        members.push(g);
        let mut queue = vec![g];
        while let Some(z) = queue.pop() {
            for i in 0..members.len() {
                let y = mul[z * n + members[i]] as usize;
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push(y);
                }
            }
        }
    }
    gens
}

struct State<'a> {
    n: usize,
    mul: &'a [u16],
    target: &'a [bool],
    images: &'a [Vec<u16>],
    gens: &'a [usize],
    sig: &'a [Signature],
    map: Vec<u16>,
    inv: Vec<u16>,
    found: Vec<Vec<u16>>,
    limit: usize,
}

impl State<'_> {
    fn set(&mut self, x: usize, y: usize, log: &mut Vec<usize>) -> bool {
        if self.map[x] != NONE {
            return self.map[x] as usize == y;
        }
        if self.inv[y] != NONE || self.sig[x] != self.sig[y] {
            return false;
        }
        self.map[x] = y as u16;
        self.inv[y] = x as u16;
        log.push(x);
        true
    }

    /// Extends the map to products of mapped elements; false on a conflict.
    fn propagate(&mut self, log: &mut Vec<usize>) -> bool {
        let n = self.n;
        let mut i = 0;
        let mut defined: Vec<usize> = (0..n).filter(|&x| self.map[x] != NONE).collect();
        while i < defined.len() {
            let x = defined[i];
            for j in 0..=i {
                let y = defined[j];
                let xy = self.mul[x * n + y] as usize;
                let img = self.mul[self.map[x] as usize * n + self.map[y] as usize] as usize;
                let fresh = self.map[xy] == NONE;
                if !self.set(xy, img, log) {
                    return false;
                }
                if fresh {
                    defined.push(xy);
                }
            }
            i += 1;
        }
        true
    }

    fn undo(&mut self, log: &[usize]) {
        for &x in log {
            self.inv[self.map[x] as usize] = NONE;
            self.map[x] = NONE;
        }
    }

    fn complete(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            let m = self.map[x] as usize;
            if self.target[x] != self.target[m] {
                return false;
            }
            let mut mapped: Vec<u16> = self.images[x].iter().map(|&a| self.map[a as usize]).collect();
            mapped.sort_unstable();
            if mapped != self.images[m] {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, k: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if k == self.gens.len() {
            let identity = self.map.iter().enumerate().all(|(x, &y)| x == y as usize);
            if !identity && self.complete() {
                self.found.push(self.map.clone());
            }
            return;
        }
        let g = self.gens[k];
        if self.map[g] != NONE {
            self.assign(k + 1);
            return;
        }
        for c in 0..self.n {
            if self.inv[c] != NONE || self.sig[g] != self.sig[c] {
                continue;
            }
            let mut log = Vec::new();
            if self.set(g, c, &mut log) && self.propagate(&mut log) {
                self.assign(k + 1);
            }
            self.undo(&log);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Vec<u16> {
        (0..n * n).map(|i| ((i / n + i % n) % n) as u16).collect()
    }

    #[test]
    fn cyclic_group_automorphisms() {
        // Z/12 under addition with 0 as the target: |Aut| = φ(12) = 4
        let n = 12;
        let mut target = vec![false; n];
        target[0] = true;
        let images: Vec<Vec<u16>> = (0..n as u16).map(|a| vec![a]).collect();
        let auts = table_automorphisms(n, &cyclic(n), &target, &images, 1000);
        assert_eq!(auts.len(), 4);
        assert_eq!(auts[0], (0..n as u16).collect::<Vec<_>>());
        for s in &auts {
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(s[(x + y) % n] as usize, (s[x] as usize + s[y] as usize) % n);
                }
            }
        }
    }

    #[test]
    fn product_group_and_limit() {
        // C2 × C2: Aut = S3
        let n = 4;
        let mul: Vec<u16> = (0..16).map(|i| ((i / 4) ^ (i % 4)) as u16).collect();
        let target = vec![true, false, false, false];
        let images: Vec<Vec<u16>> = (0..4).map(|a| vec![a]).collect();
        assert_eq!(table_automorphisms(n, &mul, &target, &images, 100).len(), 6);
        assert_eq!(table_automorphisms(n, &mul, &target, &images, 2).len(), 2);
    }
}

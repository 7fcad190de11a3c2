use super::family::{Label, SetFamily};
use crate::error::{invalid, Error, Result};

/// Largest number of `k`-subsets the exhaustive search will enumerate.
pub const BRUTE_FORCE_GUARD: u128 = 100_000;

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        while i > 0 && current[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }
}

struct Search {
    /// `later[v]`: vertices after `v` compatible with it.
    later: Vec<Bits>,
    best: Vec<usize>,
}

impl Search {
    /// Greedy colouring of `cands`; the colour count bounds any clique inside.
    fn colour_bound(&self, cands: &Bits) -> usize {
        let mut remaining = cands.clone();
        let mut colours = 0;
        while remaining.count() > 0 {
            colours += 1;
            let mut free = remaining.clone();
            while let Some(v) = free.first() {
                free.0[v / 64] &= !(1 << (v % 64));
                remaining.0[v / 64] &= !(1 << (v % 64));
                for (word, adj) in free.0.iter_mut().zip(&self.later[v].0) {
                    *word &= !adj;
                }
            }
        }
        colours
    }

    fn expand(&mut self, current: &mut Vec<usize>, cands: Bits) {
        if current.len() > self.best.len() {
            self.best = current.clone();
        }
        if current.len() + cands.count() <= self.best.len() {
            return;
        }
        if current.len() + self.colour_bound(&cands) <= self.best.len() {
            return;
        }
        let order: Vec<usize> = cands.iter().collect();
        for v in order {
            let next = cands.and(&self.later[v]);
            current.push(v);
            self.expand(current, next);
            current.pop();
        }
    }
}

/// Exact maximum size of an at most `t`-intersecting family of `k`-subsets of
/// `1..=n`, with the lexicographically least maximum family as witness.
pub fn brute_force_max(n: usize, k: usize, t: usize) -> Result<(usize, SetFamily)> {
    if k > n {
        return Err(invalid(format!("need k <= n, got n={n}, k={k}")));
    }
    let count = binomial_u128(n, k);
    if count > BRUTE_FORCE_GUARD {
        return Err(Error::GuardExceeded(format!("C({n},{k}) = {count} exceeds {BRUTE_FORCE_GUARD}")));
    }
    let subsets = k_subsets(n, k);
    let v = subsets.len();
    let masks: Vec<u64> = subsets.iter().map(|s| s.iter().fold(0u64, |m, &e| m | 1 << e)).collect();
    let mut later = Vec::with_capacity(v);
    for a in 0..v {
        let mut bits = Bits::empty(v);
        for b in a + 1..v {
            if (masks[a] & masks[b]).count_ones() as usize <= t {
                bits.set(b);
            }
        }
        later.push(bits);
    }
    let mut all = Bits::empty(v);
    for i in 0..v {
        all.set(i);
    }
    let mut search = Search { later, best: Vec::new() };
    search.expand(&mut Vec::new(), all);

    let sets = search
        .best
        .iter()
        .map(|&i| subsets[i].iter().map(|&e| Label::Int(e as i64 + 1)).collect())
        .collect();
    let witness = SetFamily::new((1..=n as i64).map(Label::Int).collect(), sets)?;
    Ok((witness.len(), witness))
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

/// Largest maximally cover-free family over `1..=n`, read off through the
/// bijection: the largest `m < n` for which `k-1`-subsets of `1..=n-m` admit
/// an at most `t`-intersecting family of size `m`. Requires `t < k - 1`.
pub fn max_cover_free_via_bijection(n: usize, k: usize, t: usize) -> Result<usize> {
    if k < 2 || k > n || t + 1 >= k {
        return Err(invalid(format!("need t < k - 1 and k <= n, got n={n}, k={k}, t={t}")));
    }
    let mut best = 0;
    for m in 1..n {
        if k - 1 > n - m {
            break;
        }
        if brute_force_max(n - m, k - 1, t)?.0 >= m {
            best = m;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{bound_simple, verify_family};

    #[test]
    fn enumerates_combinations_in_order() {
        let c = k_subsets(4, 2);
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn brute_force_examples() {
        let (size, fano) = brute_force_max(7, 3, 1).unwrap();
        assert_eq!(size, 7);
        let r = verify_family(&fano, 3, 1);
        assert!(r.k_uniform && r.exactly_t);
        assert_eq!(brute_force_max(5, 4, 2).unwrap().0, 1);
        assert_eq!(brute_force_max(4, 2, 1).unwrap().0, 6);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let (_, fam) = brute_force_max(4, 2, 0).unwrap();
        assert_eq!(fam, SetFamily::from_ints(4, &[&[1, 2], &[3, 4]]).unwrap());
    }

    #[test]
    fn guard_is_enforced() {
        assert!(matches!(brute_force_max(30, 10, 2), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn never_exceeds_the_simple_bound() {
        for n in 2..=8 {
            for k in 2..=n.min(4) {
                for t in 0..=k {
                    let (size, _) = brute_force_max(n, k, t).unwrap();
                    let bound = bound_simple(n, k, t).unwrap();
                    assert!(num_rational::Ratio::from_integer(size as u128) <= bound, "({n},{k},{t})");
                    if t == k {
                        assert_eq!(num_rational::Ratio::from_integer(size as u128), bound);
                    }
                }
            }
        }
    }

    #[test]
    fn cover_free_maximum_sits_in_its_bracket() {
        // Every member needs a private element, so nu < n.
        for n in 4..=8 {
            let nu = max_cover_free_via_bijection(n, 3, 1).unwrap();
            assert!(nu < n && nu >= 1, "n={n} nu={nu}");
        }
        assert_eq!(max_cover_free_via_bijection(6, 3, 0).unwrap(), 2);
    }
}

use std::collections::BTreeSet;

use num_rational::Ratio;

use super::family::{verify_family, Label, SetFamily};
use crate::error::{invalid, precondition, Result};

/// The Fano plane: lines `{i, i+1, i+3} mod 7` over points `1..=7`.
pub fn fano_plane() -> SetFamily {
    let sets: Vec<Vec<Label>> = (0..7)
        .map(|i| [0, 1, 3].iter().map(|d| Label::Int((i + d) % 7 + 1)).collect())
        .collect();
    SetFamily::new((1..=7).map(Label::Int).collect(), sets).expect("fano plane is well formed")
}

fn shared_label(layer: usize, i: usize, j: usize) -> Label {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    Label::Text(format!("({layer},{{{a},{b}}})"))
}

fn private_label(i: usize, j: usize) -> Label {
    Label::Text(format!("({i},{j})"))
}

/// Sets `1..=count` of the pair construction: set `i` takes `(l, {i, j})` for
/// every layer `l` and every other vertex `j` of `1..=vertices`, plus
/// `private` elements of its own.
fn pair_construction(count: usize, vertices: usize, layers: usize, private: usize) -> Vec<Vec<Label>> {
    (1..=count)
        .map(|i| {
            let mut set = Vec::new();
            for l in 1..=layers {
                for j in (1..=vertices).filter(|&j| j != i) {
                    set.push(shared_label(l, i, j));
                }
            }
            for j in 1..=private {
                set.push(private_label(i, j));
            }
            set
        })
        .collect()
}

/// `m` sets, `k`-uniform and at most `t`-intersecting, over a universe of
/// `mk - m(m-1)t/2` elements. Requires `m <= floor(k/t)`.
pub fn construct_small_n(m: usize, k: usize, t: usize) -> Result<SetFamily> {
    if t == 0 || t > k {
        return Err(invalid(format!("need 1 <= t <= k, got t={t}, k={k}")));
    }
    if m == 0 {
        return Err(invalid("m must be positive"));
    }
    let alpha = k / t;
    let beta = k - alpha * t;
    if m > alpha {
        return Err(precondition(format!("m={m} exceeds floor(k/t)={alpha}")));
    }
    SetFamily::from_sets(pair_construction(m, alpha + 1, t, beta), false)
}

/// `k/t + 1` sets, `k`-uniform and exactly `t`-intersecting, over a universe
/// of `k(k/t+1)/2` elements. Requires `t | k`.
///
/// With `k = t` both sets coincide, so the result allows duplicates.
pub fn construct_exact_t(k: usize, t: usize) -> Result<SetFamily> {
    if t == 0 || t > k {
        return Err(invalid(format!("need 1 <= t <= k, got t={t}, k={k}")));
    }
    if !k.is_multiple_of(t) {
        return Err(precondition(format!("t={t} does not divide k={k}")));
    }
    let alpha = k / t;
    SetFamily::from_sets(pair_construction(alpha + 1, alpha + 1, t, 0), k == t)
}

fn copy_label(side: char, copy: usize, inner: &Label) -> Label {
    Label::Text(format!("({side},{copy},{inner})"))
}

/// Squares a verified `(k, t)` family of `m` sets into `m^2` sets that are
/// `2k`-uniform and still at most `t`-intersecting, over `2mn` elements.
///
/// Set `(h, i)` joins set `h` of the `i`-th left copy with set `i` of the
/// `h`-th right copy.
pub fn double_family(fam: &SetFamily, k: usize, t: usize) -> Result<SetFamily> {
    let report = verify_family(fam, k, t);
    if !report.k_uniform || !report.at_most_t {
        return Err(precondition(format!("input is not a {k}-uniform at most {t}-intersecting family")));
    }
    let m = fam.len();
    let mut universe = Vec::with_capacity(2 * m * fam.universe().len());
    for copy in 1..=m {
        for side in ['G', 'H'] {
            universe.extend(fam.universe().iter().map(|x| copy_label(side, copy, x)));
        }
    }
    let mut sets = Vec::with_capacity(m * m);
    for h in 0..m {
        for i in 0..m {
            let mut set: Vec<Label> = fam.sets()[h].iter().map(|x| copy_label('G', i + 1, x)).collect();
            set.extend(fam.sets()[i].iter().map(|x| copy_label('H', h + 1, x)));
            sets.push(set);
        }
    }
    if fam.allows_duplicates() {
        SetFamily::with_duplicates(universe, sets)
    } else {
        SetFamily::new(universe, sets)
    }
}

/// `k |H| / n` as an exact rational.
pub fn relative_size(fam: &SetFamily, k: usize) -> Ratio<u64> {
    Ratio::new((k * fam.len()) as u64, fam.universe().len().max(1) as u64)
}

/// Adds the distinguished element `n - m + i` to the `i`-th set of a family
/// of `m` sets over `1..=n-m`, giving a maximally cover-free family over
/// `1..=n`.
pub fn add_distinguished(fam: &SetFamily, n: usize) -> Result<SetFamily> {
    let m = fam.len();
    if m == 0 {
        return Err(precondition("family must be nonempty"));
    }
    if m >= n {
        return Err(precondition(format!("need m < n, got m={m}, n={n}")));
    }
    let base = (n - m) as i64;
    let size = fam.sets()[0].len();
    if fam.sets().iter().any(|s| s.len() != size) {
        return Err(precondition("family must be uniform"));
    }
    let mut sets = Vec::with_capacity(m);
    for (i, set) in fam.sets().iter().enumerate() {
        for label in set {
            match label {
                Label::Int(v) if (1..=base).contains(v) => {}
                other => {
                    return Err(precondition(format!("element {other} lies outside 1..={base}")));
                }
            }
        }
        let mut grown = set.clone();
        grown.push(Label::Int(base + 1 + i as i64));
        sets.push(grown);
    }
    let universe = (1..=n as i64).map(Label::Int).collect();
    if fam.allows_duplicates() {
        SetFamily::with_duplicates(universe, sets)
    } else {
        SetFamily::new(universe, sets)
    }
}

/// Removes the smallest private element from every set of a maximally
/// cover-free family. The removed elements leave the universe too.
pub fn strip_distinguished(fam: &SetFamily) -> Result<SetFamily> {
    let mut counts = std::collections::BTreeMap::new();
    for label in fam.sets().iter().flatten() {
        *counts.entry(label).or_insert(0usize) += 1;
    }
    let mut removed = BTreeSet::new();
    let mut sets = Vec::with_capacity(fam.len());
    for (idx, set) in fam.sets().iter().enumerate() {
        let private = set
            .iter()
            .find(|l| counts[l] == 1)
            .ok_or_else(|| precondition(format!("set {idx} has no private element")))?;
        removed.insert(private.clone());
        sets.push(set.iter().filter(|l| *l != private).cloned().collect());
    }
    let universe = fam.universe().iter().filter(|l| !removed.contains(*l)).cloned().collect();
    if fam.allows_duplicates() {
        SetFamily::with_duplicates(universe, sets)
    } else {
        SetFamily::new(universe, sets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fano_is_exactly_one_intersecting_but_not_cover_free() {
        let fano = fano_plane();
        let r = verify_family(&fano, 3, 1);
        assert_eq!(fano.len(), 7);
        assert!(r.k_uniform && r.exactly_t);
        assert_eq!(r.max_pairwise_intersection, 1);
        assert!(!r.maximally_cover_free);
    }

    #[test]
    fn small_n_examples() {
        let fam = construct_small_n(2, 3, 1).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.universe().len(), 5);
        let r = verify_family(&fam, 3, 1);
        assert!(r.k_uniform && r.at_most_t);
        assert_eq!(r.max_pairwise_intersection, 1);

        let single = construct_small_n(1, 5, 2).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.universe().len(), 5);

        assert!(construct_small_n(3, 4, 2).is_err());
    }

    #[test]
    fn exact_t_examples() {
        let tri = construct_exact_t(2, 1).unwrap();
        assert_eq!(tri.len(), 3);
        assert_eq!(tri.universe().len(), 3);
        assert!(verify_family(&tri, 2, 1).exactly_t);
        let abc = SetFamily::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec!["a".into(), "b".into()], vec!["a".into(), "c".into()], vec!["b".into(), "c".into()]],
        )
        .unwrap();
        assert!(tri.equivalent_up_to_relabeling(&abc));

        let pair = construct_exact_t(3, 3).unwrap();
        assert_eq!(pair.len(), 2);
        let r = verify_family(&pair, 3, 3);
        assert!(r.k_uniform && r.exactly_t);
        assert_eq!(r.max_pairwise_intersection, 3);

        assert!(construct_exact_t(3, 2).is_err());
    }

    #[test]
    fn doubling_fano() {
        let fano = fano_plane();
        let doubled = double_family(&fano, 3, 1).unwrap();
        assert_eq!(doubled.len(), 49);
        assert_eq!(doubled.universe().len(), 98);
        let r = verify_family(&doubled, 6, 1);
        assert!(r.k_uniform && r.at_most_t);
        assert_eq!(r.max_pairwise_intersection, 1);
        assert_eq!(relative_size(&fano, 3), Ratio::from_integer(3));
        assert_eq!(relative_size(&doubled, 6), Ratio::from_integer(3));
    }

    #[test]
    fn doubling_a_single_set() {
        let one = SetFamily::from_ints(4, &[&[1, 2, 3]]).unwrap();
        let d = double_family(&one, 3, 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.universe().len(), 8);
        assert_eq!(d.sets()[0].len(), 6);
    }

    #[test]
    fn doubling_rejects_unverified_input() {
        assert!(double_family(&fano_plane(), 3, 0).is_err());
    }

    #[test]
    fn add_and_strip() {
        let fam = SetFamily::from_ints(3, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        let grown = add_distinguished(&fam, 6).unwrap();
        let expected = SetFamily::from_ints(6, &[&[1, 2, 4], &[1, 3, 5], &[2, 3, 6]]).unwrap();
        assert_eq!(grown, expected);
        assert!(verify_family(&grown, 3, 1).all_hold());

        let stripped = strip_distinguished(&grown).unwrap();
        assert_eq!(stripped, fam);

        let single = SetFamily::from_ints(3, &[&[1, 2, 3]]).unwrap();
        let four = add_distinguished(&single, 4).unwrap();
        assert_eq!(four, SetFamily::from_ints(4, &[&[1, 2, 3, 4]]).unwrap());
        // Every element of a lone set is private; the smallest goes.
        let back = strip_distinguished(&four).unwrap();
        assert_eq!(back.sets(), &[vec![Label::Int(2), Label::Int(3), Label::Int(4)]]);
        assert!(back.equivalent_up_to_relabeling(&single));

        assert!(strip_distinguished(&fano_plane()).is_err());
        assert!(add_distinguished(&fam, 3).is_err());
        assert!(add_distinguished(&fam, 5).is_err());
    }

    fn arbitrary_family() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
        (2usize..6, 0usize..3).prop_flat_map(|(k, t)| {
            let t = t.min(k - 1);
            let n = k + 3;
            (
                Just(k),
                Just(t),
                proptest::collection::vec(
                    proptest::sample::subsequence((1..=n as i64).collect::<Vec<_>>(), k),
                    0..6,
                ),
            )
        })
    }

    proptest! {
        #[test]
        fn small_n_matches_advertised_shape(k in 1usize..9, t in 1usize..4, m_seed in 0usize..8) {
            prop_assume!(t <= k);
            let alpha = k / t;
            let m = 1 + m_seed % alpha;
            let fam = construct_small_n(m, k, t).unwrap();
            let r = verify_family(&fam, k, t);
            prop_assert!(r.k_uniform && r.at_most_t);
            prop_assert_eq!(fam.len(), m);
            prop_assert_eq!(2 * fam.universe().len(), 2 * m * k - m * (m - 1) * t);
        }

        #[test]
        fn exact_t_matches_advertised_shape(alpha in 1usize..6, t in 1usize..4) {
            let k = alpha * t;
            let fam = construct_exact_t(k, t).unwrap();
            let r = verify_family(&fam, k, t);
            prop_assert!(r.k_uniform && r.exactly_t);
            prop_assert_eq!(fam.len(), alpha + 1);
            prop_assert_eq!(2 * fam.universe().len(), k * (alpha + 1));
        }

        #[test]
        fn strip_inverts_add((k, t, sets) in arbitrary_family()) {
            let dedup: std::collections::BTreeSet<_> = sets.into_iter().collect();
            let sets: Vec<Vec<i64>> = dedup.into_iter().collect();
            prop_assume!(!sets.is_empty());
            let refs: Vec<&[i64]> = sets.iter().map(|s| s.as_slice()).collect();
            let base = k + 3;
            let fam = SetFamily::from_ints(base as i64, &refs).unwrap();
            let before = verify_family(&fam, k, t);
            let grown = add_distinguished(&fam, base + fam.len()).unwrap();
            let after = verify_family(&grown, k + 1, t);
            prop_assert!(after.maximally_cover_free && after.k_uniform);
            prop_assert_eq!(before.at_most_t, after.at_most_t);
            let back = strip_distinguished(&grown).unwrap();
            prop_assert!(back.equivalent_up_to_relabeling(&fam));
            prop_assert_eq!(verify_family(&back, k, t).at_most_t, before.at_most_t);
        }

        #[test]
        fn doubling_preserves_relative_size((k, t, sets) in arbitrary_family()) {
            let dedup: std::collections::BTreeSet<_> = sets.into_iter().collect();
            let sets: Vec<Vec<i64>> = dedup.into_iter().collect();
            let refs: Vec<&[i64]> = sets.iter().map(|s| s.as_slice()).collect();
            let fam = SetFamily::from_ints((k + 3) as i64, &refs).unwrap();
            prop_assume!(verify_family(&fam, k, t).at_most_t);
            let d = double_family(&fam, k, t).unwrap();
            let r = verify_family(&d, 2 * k, t);
            prop_assert!(r.k_uniform && r.at_most_t);
            prop_assert_eq!(d.len(), fam.len() * fam.len());
            prop_assert_eq!(relative_size(&d, 2 * k), relative_size(&fam, k));
        }
    }
}

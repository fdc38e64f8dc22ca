//! Koszul signs for graded-antisymmetric reordering.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::scalar::Scalar;

/// Parity of the reordering sign taking `x_0,...,x_{n-1}` to
/// `x_{perm[0]},...,x_{perm[n-1]}` in a graded-antisymmetric product, where
/// `degrees[i]` is the degree of `x_i`.
///
/// Each inverted pair contributes `|x||y| + 1`.
pub fn koszul_parity(perm: &[usize], degrees: &[i64]) -> Result<bool> {
    let n = perm.len();
    if degrees.len() != n {
        return Err(Error::LengthMismatch(format!(
            "permutation has length {n}, degrees have length {}",
            degrees.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotAPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    let mut odd = false;
    for k in 0..n {
        for l in k + 1..n {
            if perm[k] > perm[l] {
                let e = degrees[perm[k]] * degrees[perm[l]] + 1;
                odd ^= e.rem_euclid(2) == 1;
            }
        }
    }
    Ok(odd)
}

/// The graded-antisymmetric reordering sign as a scalar `±1`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<Scalar> {
    Ok(if koszul_parity(perm, degrees)? {
        -Scalar::one()
    } else {
        Scalar::one()
    })
}

/// A weakly increasing index tuple together with the sign relating it to
/// the tuple it was produced from: `[input] = sign * [key]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedTupleKey {
    pub key: Vec<usize>,
    pub negative: bool,
}

impl SignedTupleKey {
    pub fn sign(&self) -> Scalar {
        if self.negative {
            -Scalar::one()
        } else {
            Scalar::one()
        }
    }
}

/// Sorts a tuple of basis indices into canonical order.
///
/// Returns `None` when the tuple vanishes by antisymmetry, i.e. when an
/// even-degree basis vector is repeated.
pub fn canonicalize_tuple(
    indices: &[usize],
    space: &GradedSpace,
) -> Result<Option<SignedTupleKey>> {
    for &i in indices {
        space.check_index(i)?;
    }
    Ok(canonicalize_with(indices, |i| space.degree(i)))
}

/// Canonicalization against an arbitrary degree function. Indices are
/// assumed valid.
pub fn canonicalize_with(
    indices: &[usize],
    degree: impl Fn(usize) -> i64,
) -> Option<SignedTupleKey> {
    let n = indices.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&k| indices[k]);
    let key: Vec<usize> = perm.iter().map(|&k| indices[k]).collect();
    for w in key.windows(2) {
        if w[0] == w[1] && degree(w[0]).rem_euclid(2) == 0 {
            return None;
        }
    }
    let mut odd = false;
    for k in 0..n {
        for l in k + 1..n {
            if perm[k] > perm[l] {
                let e = degree(indices[perm[k]]) * degree(indices[perm[l]]) + 1;
                odd ^= e.rem_euclid(2) == 1;
            }
        }
    }
    Some(SignedTupleKey { key, negative: odd })
}

/// Calls `f` on every weakly increasing tuple of length `len` drawn from
/// `0..dim`, skipping tuples that repeat an index for which `repeatable`
/// is false.
pub fn for_each_canonical_tuple(
    dim: usize,
    len: usize,
    repeatable: impl Fn(usize) -> bool,
    mut f: impl FnMut(&[usize]),
) {
    fn go(
        start: usize,
        dim: usize,
        len: usize,
        cur: &mut Vec<usize>,
        repeatable: &dyn Fn(usize) -> bool,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == len {
            f(cur);
            return;
        }
        for i in start..dim {
            cur.push(i);
            let next = if repeatable(i) { i } else { i + 1 };
            go(next, dim, len, cur, repeatable, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(len);
    go(0, dim, len, &mut cur, &repeatable, &mut f);
}

/// All canonical tuples of the given length over a graded space (even
/// degree entries never repeat).
pub fn canonical_tuples(space: &GradedSpace, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_canonical_tuple(
        space.dim(),
        len,
        |i| space.degree(i).rem_euclid(2) == 1,
        |t| out.push(t.to_vec()),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn examples() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[3, 4, 5]).unwrap(), int(1));
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), int(1));
        assert_eq!(koszul_sign(&[1, 0], &[0, 0]).unwrap(), int(-1));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            koszul_sign(&[0, 1], &[1]),
            Err(Error::LengthMismatch(_))
        ));
        assert!(matches!(
            koszul_sign(&[0, 0], &[1, 1]),
            Err(Error::NotAPermutation(_))
        ));
        assert!(matches!(
            koszul_sign(&[0, 2], &[1, 1]),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn canonical_examples() {
        let v = GradedSpace::from_basis([("alpha", 1), ("beta", 4), ("x", 2)]).unwrap();
        let k = canonicalize_tuple(&[0, 0, 0], &v).unwrap().unwrap();
        assert_eq!(k.key, vec![0, 0, 0]);
        assert!(!k.negative);
        let k = canonicalize_tuple(&[1, 0], &v).unwrap().unwrap();
        assert_eq!(k.key, vec![0, 1]);
        assert_eq!(k.sign(), int(-1));
        assert_eq!(canonicalize_tuple(&[2, 2], &v).unwrap(), None);
        assert!(canonicalize_tuple(&[5], &v).is_err());
    }

    #[test]
    fn tuple_enumeration() {
        let v = GradedSpace::from_basis([("a", 1), ("b", 0)]).unwrap();
        let ts = canonical_tuples(&v, 2);
        assert_eq!(ts, vec![vec![0, 0], vec![0, 1]]);
    }

    proptest! {
        #[test]
        fn sign_is_a_cocycle(degrees in proptest::collection::vec(-3i64..4, 0..=4)) {
            let n = degrees.len();
            let perms = permutations(n);
            for s in &perms {
                let moved: Vec<i64> = s.iter().map(|&k| degrees[k]).collect();
                for r in &perms {
                    let composite: Vec<usize> = r.iter().map(|&k| s[k]).collect();
                    let lhs = koszul_sign(&composite, &degrees).unwrap();
                    let rhs = koszul_sign(s, &degrees).unwrap() * koszul_sign(r, &moved).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn canonicalization_is_equivariant(degrees in proptest::collection::vec(-3i64..4, 1..=4)) {
            let n = degrees.len();
            let v = GradedSpace::from_basis(
                degrees.iter().enumerate().map(|(i, &d)| (format!("e{i}"), d)),
            ).unwrap();
            // repeat-free tuple in reverse order
            let t: Vec<usize> = (0..n).rev().collect();
            let base = canonicalize_tuple(&t, &v).unwrap().unwrap();
            let tdeg: Vec<i64> = t.iter().map(|&i| degrees[i]).collect();
            for s in permutations(n) {
                let moved: Vec<usize> = s.iter().map(|&k| t[k]).collect();
                let c = canonicalize_tuple(&moved, &v).unwrap().unwrap();
                prop_assert_eq!(&c.key, &base.key);
                prop_assert_eq!(c.sign(), koszul_sign(&s, &tdeg).unwrap() * base.sign());
            }
        }
    }
}

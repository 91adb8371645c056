//! Monomial basis of the bigraded exterior algebra.
//!
//! A basis element is `e^I /\ ebar^J` with `I`, `J` strictly increasing
//! 1-based index lists. The holomorphic block is always stored before the
//! anti-holomorphic one; every Koszul sign in the engine is derived from
//! counting the transpositions needed to restore that canonical order.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::AlgebraError;

/// `e^I /\ ebar^J`, with strictly increasing `I, J <= {1..n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub i: Vec<u8>,
    pub j: Vec<u8>,
}

impl BasisElement {
    pub fn new(i: Vec<u8>, j: Vec<u8>) -> Self {
        debug_assert!(i.windows(2).all(|w| w[0] < w[1]), "I not strictly increasing");
        debug_assert!(j.windows(2).all(|w| w[0] < w[1]), "J not strictly increasing");
        BasisElement { i, j }
    }

    pub fn scalar() -> Self {
        BasisElement { i: Vec::new(), j: Vec::new() }
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.i.len(), self.j.len())
    }

    pub fn degree(&self) -> usize {
        self.i.len() + self.j.len()
    }

    /// The top element `e^{1..n} /\ ebar^{1..n}`.
    pub fn top(n: u8) -> Self {
        BasisElement { i: (1..=n).collect(), j: (1..=n).collect() }
    }

    pub fn is_top(&self, n: u8) -> bool {
        self.i.len() == n as usize && self.j.len() == n as usize
    }

    /// Complementary element: holomorphic complement of `J`, anti-holomorphic
    /// complement of `I`. This is the support of the Hodge star image.
    pub fn star_partner(&self, n: u8) -> Self {
        BasisElement { i: complement(&self.j, n), j: complement(&self.i, n) }
    }

    pub fn canonical_key(&self) -> (usize, usize, &[u8], &[u8]) {
        (self.degree(), self.i.len(), &self.i, &self.j)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for v in &self.i {
            s.push((b'0' + v) as char);
        }
        s.push('|');
        for v in &self.j {
            s.push((b'0' + v) as char);
        }
        s
    }

    pub fn parse(s: &str, n: u8) -> Result<Self, AlgebraError> {
        let bad = || AlgebraError::Parse(alloc::string::ToString::to_string(s));
        let (is, js) = s.split_once('|').ok_or_else(bad)?;
        let read = |part: &str| -> Result<Vec<u8>, AlgebraError> {
            let mut out = Vec::new();
            for ch in part.trim().chars() {
                let d = ch.to_digit(10).ok_or_else(bad)? as u8;
                if d == 0 || d > n {
                    return Err(bad());
                }
                if out.last().map_or(false, |&last| last >= d) {
                    return Err(bad());
                }
                out.push(d);
            }
            Ok(out)
        };
        Ok(BasisElement { i: read(is)?, j: read(js)? })
    }
}

/// Canonical total order: lexicographic on `(p+q, p, I, J)`.
impl Ord for BasisElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

impl PartialOrd for BasisElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl fmt::Debug for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

pub fn complement(sorted: &[u8], n: u8) -> Vec<u8> {
    (1..=n).filter(|k| !sorted.contains(k)).collect()
}

/// Merges two strictly increasing lists, counting the transpositions needed
/// to interleave them. Returns `None` on a repeated index.
pub fn merge_with_sign(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i8;
    let mut ia = 0;
    let mut ib = 0;
    while ia < a.len() && ib < b.len() {
        match a[ia].cmp(&b[ib]) {
            Ordering::Less => {
                out.push(a[ia]);
                ia += 1;
            }
            Ordering::Greater => {
                // b[ib] jumps over the remaining entries of a
                if (a.len() - ia) % 2 == 1 {
                    sign = -sign;
                }
                out.push(b[ib]);
                ib += 1;
            }
            Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[ia..]);
    out.extend_from_slice(&b[ib..]);
    Some((out, sign))
}

/// Wedge of two basis monomials: canonical element and Koszul sign,
/// or `None` when an index repeats.
pub fn wedge_basis(a: &BasisElement, b: &BasisElement) -> Option<(BasisElement, i8)> {
    let (i, sign_i) = merge_with_sign(&a.i, &b.i)?;
    let (j, sign_j) = merge_with_sign(&a.j, &b.j)?;
    // moving b's holomorphic block left across a's anti-holomorphic block
    let cross = (a.j.len() * b.i.len()) % 2;
    let mut sign = sign_i * sign_j;
    if cross == 1 {
        sign = -sign;
    }
    Some((BasisElement::new(i, j), sign))
}

/// Sign of conjugation: `conj(e^I /\ ebar^J) = sign * e^J /\ ebar^I`
/// (applied to conjugated coefficients).
pub fn conj_sign(elt: &BasisElement) -> i8 {
    if (elt.i.len() * elt.j.len()) % 2 == 1 {
        -1
    } else {
        1
    }
}

fn subsets_of_size(n: u8, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::new();
    fn rec(n: u8, k: usize, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 1, &mut cur, &mut out);
    out
}

/// All basis elements of bidegree `(p, q)`, in canonical order.
pub fn basis_of_bidegree(n: u8, p: usize, q: usize) -> Vec<BasisElement> {
    if p > n as usize || q > n as usize {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in subsets_of_size(n, p) {
        for j in subsets_of_size(n, q) {
            out.push(BasisElement::new(i.clone(), j));
        }
    }
    out.sort();
    out
}

/// The full monomial basis of the exterior algebra, in canonical order
/// (size `4^n`).
pub fn full_basis(n: u8) -> Vec<BasisElement> {
    let mut out = Vec::new();
    for k in 0..=(2 * n as usize) {
        out.extend(basis_of_degree(n, k));
    }
    out
}

/// All basis elements of total degree `k`, in canonical order.
pub fn basis_of_degree(n: u8, k: usize) -> Vec<BasisElement> {
    let mut out = Vec::new();
    for p in 0..=k.min(n as usize) {
        let q = k - p;
        out.extend(basis_of_bidegree(n, p, q));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn repeated_index_vanishes() {
        let a = BasisElement::new(vec![1], vec![]);
        assert!(wedge_basis(&a, &a).is_none());
    }

    #[test]
    fn odd_odd_anticommute() {
        // e^1 /\ ebar^1 = -(ebar^1 /\ e^1)
        let e1 = BasisElement::new(vec![1], vec![]);
        let eb1 = BasisElement::new(vec![], vec![1]);
        let (ab, sab) = wedge_basis(&e1, &eb1).unwrap();
        let (ba, sba) = wedge_basis(&eb1, &e1).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(sab, -sba);
        assert_eq!(sab, 1); // e^1 /\ ebar^1 is already canonical
    }

    #[test]
    fn merge_sign_counts_transpositions() {
        // (e^2) /\ (e^1) = -e^{12}
        let (merged, sign) = merge_with_sign(&[2], &[1]).unwrap();
        assert_eq!(merged, vec![1, 2]);
        assert_eq!(sign, -1);
    }

    #[test]
    fn ordering_is_by_degree_then_p() {
        let mut v = basis_of_degree(2, 2);
        v.dedup();
        // degree 2 of n=2: (2,0) one, (1,1) four, (0,2) one
        assert_eq!(v.len(), 6);
        assert_eq!(v[0].bidegree(), (0, 2));
        assert_eq!(v[5].bidegree(), (2, 0));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_of_degree(3, 3).len(), 20); // C(6,3)
        assert_eq!(basis_of_bidegree(3, 1, 1).len(), 9);
    }

    #[test]
    fn parse_serialize_round_trip() {
        let b = BasisElement::new(vec![1, 3], vec![2]);
        let s = b.serialize();
        assert_eq!(s, "13|2");
        assert_eq!(BasisElement::parse(&s, 3).unwrap(), b);
        assert!(BasisElement::parse("31|2", 3).is_err());
    }
}

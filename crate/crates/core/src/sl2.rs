//! String combinatorics for the sl2 case: general position, the two-string
//! decomposition rule, and normalization of tensor products in the
//! Grothendieck ring.

use crate::cartan::cartan_from_label;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::tsystem::{FundamentalProvider, KrSolver};
use std::collections::BTreeMap;
use std::fmt;

/// A string: the points `lo, lo+2, ..., lo+2(n-1)` of q-exponents, labelling
/// the evaluation module `V_n(q^{lo+n-1})`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Str {
    pub lo: i64,
    pub n: i64,
}

impl Str {
    pub fn new(lo: i64, n: i64) -> Str {
        assert!(n >= 1, "string must have at least one point");
        Str { lo, n }
    }

    /// Highest point `lo + 2(n-1)`.
    pub fn hi(&self) -> i64 {
        self.lo + 2 * (self.n - 1)
    }

    /// Build from an exponent interval; `None` when the interval is empty.
    pub fn from_interval(lo: i64, hi: i64) -> Option<Str> {
        if hi < lo {
            None
        } else {
            debug_assert_eq!((hi - lo) % 2, 0);
            Some(Str { lo, n: (hi - lo) / 2 + 1 })
        }
    }

    pub fn contains(&self, other: &Str) -> bool {
        self.lo <= other.lo && other.hi() <= self.hi()
    }

    /// The q-character of `V_n(q^{lo+n-1})`, computed by the A1 T-system.
    pub fn qchar(&self) -> LaurentPoly {
        let a1 = cartan_from_label("A1".parse().unwrap()).unwrap();
        let solver = KrSolver::new(&a1, FundamentalProvider::Builtin);
        solver.t(1, self.n, self.lo).expect("A1 T-system")
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]", self.lo, self.hi())
    }
}

/// True iff the tensor product `V(a) (x) V(b)` is simple: the union of the
/// two strings is not a string, or one contains the other. Strings in
/// different parity classes never form a string together.
pub fn in_general_position(a: &Str, b: &Str) -> bool {
    if (a.lo - b.lo) % 2 != 0 {
        return true;
    }
    let (x, y) = if a.lo <= b.lo { (a, b) } else { (b, a) };
    let union_is_string = y.lo <= x.hi() + 2;
    !union_is_string || x.contains(y) || y.contains(x)
}

/// The four derived strings of a special pair, ordered so `lo(a) <= lo(b)`:
/// union, intersection, and the two outer remainders; empty intervals are
/// `None`.
pub fn special_split(a: &Str, b: &Str) -> Result<(Str, Option<Str>, Option<Str>, Option<Str>)> {
    if in_general_position(a, b) {
        return Err(Error::NotSpecialPosition);
    }
    let (x, y) = if a.lo <= b.lo { (a, b) } else { (b, a) };
    let (l1, r1) = (x.lo, x.hi());
    let (l2, r2) = (y.lo, y.hi());
    let s3 = Str::from_interval(l1, r2).expect("union nonempty");
    let s4 = Str::from_interval(l2, r1);
    let s5 = Str::from_interval(l1, l2 - 4);
    let s6 = Str::from_interval(r1 + 4, r2);
    Ok((s3, s4, s5, s6))
}

/// A multiset of pairwise-general-position strings, labelling a simple
/// module class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct SimpleClass(Vec<Str>);

impl SimpleClass {
    pub fn new(mut strings: Vec<Str>) -> Result<SimpleClass> {
        for (p, a) in strings.iter().enumerate() {
            for b in &strings[p + 1..] {
                if !in_general_position(a, b) {
                    return Err(Error::NotSpecialPosition);
                }
            }
        }
        strings.sort();
        Ok(SimpleClass(strings))
    }

    pub fn strings(&self) -> &[Str] {
        &self.0
    }

    pub fn qchar(&self) -> LaurentPoly {
        self.0
            .iter()
            .fold(LaurentPoly::one(), |acc, s| acc.mul(&s.qchar()))
    }
}

impl fmt::Display for SimpleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (p, s) in self.0.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// An element of the Grothendieck ring: simple classes with nonzero integer
/// multiplicities.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct K0Elem(BTreeMap<SimpleClass, i64>);

impl K0Elem {
    pub fn add_class(&mut self, c: SimpleClass, mult: i64) {
        let slot = self.0.entry(c).or_insert(0);
        *slot += mult;
        if *slot == 0 {
            self.0.retain(|_, m| *m != 0);
        }
    }

    pub fn classes(&self) -> impl Iterator<Item = (&SimpleClass, &i64)> {
        self.0.iter()
    }

    pub fn qchar(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for (c, &m) in &self.0 {
            acc = acc.add(&c.qchar().scale(&m.into()));
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<_> = self
            .0
            .iter()
            .map(|(c, m)| {
                let class: Vec<_> = c.strings().iter().map(|s| vec![s.lo, s.n]).collect();
                serde_json::json!({"class": class, "mult": m})
            })
            .collect();
        serde_json::Value::Array(items)
    }
}

/// Decompose `V(a) (x) V(b)` in the Grothendieck ring.
pub fn tensor_pair(a: &Str, b: &Str) -> K0Elem {
    let mut out = K0Elem::default();
    if in_general_position(a, b) {
        out.add_class(SimpleClass::new(vec![*a, *b]).expect("general pair"), 1);
        return out;
    }
    let (s3, s4, s5, s6) = special_split(a, b).expect("special pair");
    let first: Vec<Str> = [Some(s3), s4].into_iter().flatten().collect();
    let second: Vec<Str> = [s5, s6].into_iter().flatten().collect();
    out.add_class(SimpleClass::new(first).expect("general by construction"), 1);
    out.add_class(SimpleClass::new(second).expect("general by construction"), 1);
    out
}

/// The termination measure of the rewriting: lexicographic
/// `(total length, -sum of squared lengths)`.
fn measure(strings: &[Str]) -> (i64, i64) {
    let total: i64 = strings.iter().map(|s| s.n).sum();
    let sq: i64 = strings.iter().map(|s| s.n * s.n).sum();
    (total, -sq)
}

/// Fully expand a product of evaluation modules in the Grothendieck ring,
/// rewriting the leftmost-lowest special pair until every term is a
/// pairwise-general multiset.
pub fn normalize(product: &[Str]) -> K0Elem {
    let mut sorted: Vec<Str> = product.to_vec();
    sorted.sort();
    let mut pending: Vec<(Vec<Str>, i64)> = vec![(sorted, 1)];
    let mut out = K0Elem::default();
    while let Some((strings, mult)) = pending.pop() {
        let special = strings
            .iter()
            .enumerate()
            .flat_map(|(p, a)| {
                strings
                    .iter()
                    .enumerate()
                    .skip(p + 1)
                    .map(move |(q, b)| (p, q, a, b))
            })
            .find(|(_, _, a, b)| !in_general_position(a, b));
        match special {
            None => {
                out.add_class(SimpleClass::new(strings).expect("pairwise general"), mult);
            }
            Some((p, q, a, b)) => {
                let (a, b) = (*a, *b);
                let rest: Vec<Str> = strings
                    .iter()
                    .enumerate()
                    .filter(|&(idx, _)| idx != p && idx != q)
                    .map(|(_, s)| *s)
                    .collect();
                let before = measure(&strings);
                for (class, m) in tensor_pair(&a, &b).classes() {
                    let mut next = rest.clone();
                    next.extend_from_slice(class.strings());
                    next.sort();
                    assert!(measure(&next) < before, "termination measure failed");
                    pending.push((next, mult * m));
                }
            }
        }
    }
    out
}

/// Whether every point of every string lies in `{0, -2, ..., -2*ell}`.
pub fn in_category_ell(c: &SimpleClass, ell: i64) -> bool {
    c.strings().iter().all(|s| s.lo >= -2 * ell && s.hi() <= 0)
}

/// All strings contained in `{0, -2, ..., -2*ell}`.
pub fn strings_in_category(ell: i64) -> Vec<Str> {
    let mut out = Vec::new();
    for lo in (-2 * ell..=0).step_by(2) {
        for hi in (lo..=0).step_by(2) {
            out.push(Str::from_interval(lo, hi).unwrap());
        }
    }
    out
}

/// Deterministic sample of string pairs in special position, for randomized
/// identity checks.
pub fn random_special_pairs(count: usize, seed: u64) -> Vec<(Str, Str)> {
    let mut state = seed | 1;
    let mut next = move |m: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % m
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l1 = next(9) as i64 * 2 - 8;
        let r1 = l1 + next(6) as i64 * 2;
        // overlap or adjacency on the right, strictly longer reach
        let l2 = l1 + 2 + next(((r1 - l1) / 2 + 1) as u64) as i64 * 2;
        let r2 = r1 + 2 + next(5) as i64 * 2;
        let a = Str::from_interval(l1, r1).unwrap();
        let b = Str::from_interval(l2, r2).unwrap();
        if !in_general_position(&a, &b) {
            out.push((a, b));
        }
    }
    out
}

/// Parse `"(lo,n);(lo,n);..."` into strings.
pub fn parse_strings(s: &str) -> Result<Vec<Str>> {
    let err = || Error::Config(format!("bad string list `{s}`"));
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let inner = part
                .trim()
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(err)?;
            let (lo, n) = inner.split_once(',').ok_or_else(err)?;
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            if n < 1 {
                return Err(err());
            }
            Ok(Str { lo: lo.trim().parse().map_err(|_| err())?, n })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(lo: i64, hi: i64) -> Str {
        Str::from_interval(lo, hi).unwrap()
    }

    #[test]
    fn general_position_cases() {
        // the worked special pair
        assert!(!in_general_position(&st(0, 8), &st(6, 16)));
        // containment
        assert!(in_general_position(&st(0, 8), &st(2, 4)));
        assert!(in_general_position(&st(2, 4), &st(2, 4)));
        // gap
        assert!(in_general_position(&st(0, 2), &st(8, 10)));
        // adjacency without overlap is special
        assert!(!in_general_position(&st(0, 2), &st(4, 6)));
        // mixed parity is always general
        assert!(in_general_position(&st(0, 4), &st(1, 3)));
    }

    #[test]
    fn prop3_worked_example() {
        let (s3, s4, s5, s6) = special_split(&st(0, 8), &st(6, 16)).unwrap();
        assert_eq!(s3, st(0, 16));
        assert_eq!(s4, Some(st(6, 8)));
        assert_eq!(s5, Some(st(0, 2)));
        assert_eq!(s6, Some(st(12, 16)));
        // order of arguments does not matter
        assert_eq!(
            special_split(&st(6, 16), &st(0, 8)).unwrap(),
            (s3, s4, s5, s6)
        );
    }

    #[test]
    fn split_with_empty_parts() {
        let (s3, s4, s5, s6) = special_split(&st(0, 0), &st(2, 2)).unwrap();
        assert_eq!(s3, st(0, 2));
        assert_eq!(s4, None);
        assert_eq!(s5, None);
        assert_eq!(s6, None);

        let (s3, s4, s5, s6) = special_split(&st(0, 4), &st(2, 6)).unwrap();
        assert_eq!(s3, st(0, 6));
        assert_eq!(s4, Some(st(2, 4)));
        assert_eq!(s5, None);
        assert_eq!(s6, None);

        assert!(matches!(
            special_split(&st(0, 2), &st(8, 10)),
            Err(Error::NotSpecialPosition)
        ));
    }

    #[test]
    fn tensor_pair_examples() {
        let t = tensor_pair(&st(0, 8), &st(6, 16));
        let expect: Vec<(Vec<Str>, i64)> = vec![
            (vec![st(0, 2), st(12, 16)], 1),
            (vec![st(0, 16), st(6, 8)], 1),
        ];
        let got: Vec<(Vec<Str>, i64)> = t
            .classes()
            .map(|(c, &m)| (c.strings().to_vec(), m))
            .collect();
        assert_eq!(got, expect);

        // general pair stays put
        let t = tensor_pair(&st(0, 4), &st(0, 4));
        assert_eq!(t.classes().count(), 1);

        // V1 (x) V1 at adjacent points: big string plus trivial class
        let t = tensor_pair(&st(0, 0), &st(2, 2));
        let got: Vec<(Vec<Str>, i64)> = t
            .classes()
            .map(|(c, &m)| (c.strings().to_vec(), m))
            .collect();
        assert_eq!(got, vec![(vec![], 1), (vec![st(0, 2)], 1)]);
    }

    #[test]
    fn eq1_character_identity_worked_example() {
        let (a, b) = (st(0, 8), st(6, 16));
        let lhs = a.qchar().mul(&b.qchar());
        let rhs = tensor_pair(&a, &b).qchar();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_three_fundamentals() {
        // V1(1) (x) V1(q^2) (x) V1(q^4)
        let out = normalize(&[st(0, 0), st(2, 2), st(4, 4)]);
        let got: Vec<(Vec<Str>, i64)> = out
            .classes()
            .map(|(c, &m)| (c.strings().to_vec(), m))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![st(0, 0)], 1),
                (vec![st(0, 4)], 1),
                (vec![st(4, 4)], 1),
            ]
        );
        // character oracle
        let lhs = st(0, 0)
            .qchar()
            .mul(&st(2, 2).qchar())
            .mul(&st(4, 4).qchar());
        assert_eq!(lhs, out.qchar());
        assert_eq!(out.qchar().dimension(), 8.into());
    }

    #[test]
    fn normalize_fixes_general_multisets() {
        let input = vec![st(0, 4), st(0, 2), st(8, 10)];
        let out = normalize(&input);
        let got: Vec<(Vec<Str>, i64)> = out
            .classes()
            .map(|(c, &m)| (c.strings().to_vec(), m))
            .collect();
        let mut sorted = input.clone();
        sorted.sort();
        assert_eq!(got, vec![(sorted, 1)]);
    }

    #[test]
    fn normalize_character_identity_randomized() {
        // deterministic pseudo-random triples
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..25 {
            let strings: Vec<Str> = (0..3)
                .map(|_| {
                    let lo = (next() % 7) as i64 * 2 - 6;
                    let n = (next() % 4) as i64 + 1;
                    Str::new(lo, n)
                })
                .collect();
            let out = normalize(&strings);
            let lhs = strings
                .iter()
                .fold(LaurentPoly::one(), |acc, s| acc.mul(&s.qchar()));
            assert_eq!(lhs, out.qchar(), "{strings:?}");
            assert!(out.classes().all(|(_, &m)| m > 0));
        }
    }

    #[test]
    fn category_membership() {
        assert!(in_category_ell(&SimpleClass::new(vec![st(-2, 0)]).unwrap(), 1));
        assert!(!in_category_ell(&SimpleClass::new(vec![st(-4, 0)]).unwrap(), 1));
        // the frozen string of C_ell
        for ell in 1..=3 {
            let frozen = st(-2 * ell, 0);
            assert_eq!(frozen.n, ell + 1);
            assert!(in_category_ell(&SimpleClass::new(vec![frozen]).unwrap(), ell));
        }
        assert_eq!(strings_in_category(1).len(), 3);
        assert_eq!(strings_in_category(2).len(), 6);
    }

    #[test]
    fn string_qchar_examples() {
        assert_eq!(st(0, 0).qchar(), "Y[1,0] + Y[1,2]^-1".parse().unwrap());
        assert_eq!(
            st(0, 2).qchar(),
            "Y[1,0]*Y[1,2] + Y[1,0]*Y[1,4]^-1 + Y[1,2]^-1*Y[1,4]^-1"
                .parse()
                .unwrap()
        );
        assert_eq!(st(-6, 0).qchar().dimension(), 5.into());
    }

    #[test]
    fn parse_string_lists() {
        assert_eq!(
            parse_strings("(0,5);(6,6)").unwrap(),
            vec![Str::new(0, 5), Str::new(6, 6)]
        );
        assert!(parse_strings("(0,0)").is_err());
        assert!(parse_strings("junk").is_err());
    }
}

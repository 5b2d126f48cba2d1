//! Exact sparse multivariate Laurent-polynomial arithmetic over the
//! integers, with variables drawn from the indexed families `Y`, `z`, `v`.
//!
//! Keys are totally ordered by (family, node, shift); this order fixes the
//! canonical text and JSON serializations.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarFamily {
    Y,
    Z,
    V,
}

impl VarFamily {
    pub fn letter(self) -> char {
        match self {
            VarFamily::Y => 'Y',
            VarFamily::Z => 'z',
            VarFamily::V => 'v',
        }
    }

    pub fn from_letter(c: char) -> Option<VarFamily> {
        match c {
            'Y' | 'y' => Some(VarFamily::Y),
            'Z' | 'z' => Some(VarFamily::Z),
            'V' | 'v' => Some(VarFamily::V),
            _ => None,
        }
    }
}

/// One indexed variable, e.g. `Y[2,-1]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarKey {
    pub family: VarFamily,
    pub node: usize,
    pub shift: i64,
}

impl VarKey {
    pub fn y(node: usize, shift: i64) -> VarKey {
        VarKey { family: VarFamily::Y, node, shift }
    }
    pub fn z(node: usize, shift: i64) -> VarKey {
        VarKey { family: VarFamily::Z, node, shift }
    }
    pub fn v(node: usize, shift: i64) -> VarKey {
        VarKey { family: VarFamily::V, node, shift }
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.family.letter(), self.node, self.shift)
    }
}

impl fmt::Debug for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for VarKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<VarKey> {
        let err = || Error::PolyParse(format!("bad variable `{s}`"));
        let mut chars = s.chars();
        let family = VarFamily::from_letter(chars.next().ok_or_else(err)?).ok_or_else(err)?;
        let rest = chars.as_str();
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        Ok(VarKey {
            family,
            node: a.trim().parse().map_err(|_| err())?,
            shift: b.trim().parse().map_err(|_| err())?,
        })
    }
}

/// A Laurent monomial: finite map from variables to nonzero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<VarKey, i64>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(k: VarKey) -> Monomial {
        Monomial::from_powers([(k, 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (VarKey, i64)>>(it: I) -> Monomial {
        let mut m = Monomial::default();
        for (k, e) in it {
            m.mul_var(k, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, k: &VarKey) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&VarKey, &i64)> {
        self.0.iter()
    }

    /// Multiply by `k^e` in place, dropping zero exponents.
    pub fn mul_var(&mut self, k: VarKey, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.0.entry(k).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.0.remove(&k);
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (&k, &e) in other.powers() {
            m.mul_var(k, e);
        }
        m
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(&k, &e)| (k, -e)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(&k, &x)| (k, x * e)).collect())
    }

    pub fn total_degree(&self) -> i64 {
        self.0.values().sum()
    }

    /// True iff every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.0.values().all(|&e| e >= 0)
    }

    /// Graded-lexicographic comparison: total degree first, then the
    /// exponents in VarKey order (missing = 0).
    pub fn cmp_grlex(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(&(ka, &ea)), Some(&(kb, &eb))) => {
                    use std::cmp::Ordering::*;
                    match ka.cmp(kb) {
                        Equal => match ea.cmp(&eb) {
                            Equal => {
                                a.next();
                                b.next();
                            }
                            ord => return ord,
                        },
                        // the earlier key is held by one side only; its
                        // exponent is compared against 0
                        Less => match ea.cmp(&0) {
                            Equal => unreachable!("stored zero exponent"),
                            ord => return ord,
                        },
                        Greater => match 0.cmp(&eb) {
                            Equal => unreachable!("stored zero exponent"),
                            ord => return ord,
                        },
                    }
                }
                (Some(&(_, &ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, &eb))) => return 0.cmp(&eb),
            }
        }
    }

    pub fn spectral_shift(&self, s: i64) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|(&k, &e)| (VarKey { shift: k.shift + s, ..k }, e))
                .collect(),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{k}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A Laurent polynomial in canonical form: no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly(BTreeMap<Monomial, BigInt>);

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(Monomial::one(), BigInt::one())
    }

    pub fn var(k: VarKey) -> LaurentPoly {
        LaurentPoly::monomial(Monomial::var(k), BigInt::one())
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> LaurentPoly {
        LaurentPoly::monomial(Monomial::one(), c.into())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> LaurentPoly {
        let mut p = LaurentPoly::default();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.0.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(k, c)| (k.mul(m), c.clone())).collect())
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly(self.0.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.0
            .iter()
            .max_by(|(a, _), (b, _)| a.cmp_grlex(b))
    }

    /// Exact division: returns `s` with `s * q == p`, or
    /// `ExactDivisionFailed` when no such integer Laurent polynomial exists.
    pub fn exact_div(&self, q: &LaurentPoly) -> Result<LaurentPoly> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let (lq_m, lq_c) = q.leading_term().unwrap();
        let lq_m = lq_m.clone();
        let lq_c = lq_c.clone();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::default();
        // each successful step recovers one term of the true quotient, so a
        // valid division performs exactly `quot.num_terms()` iterations;
        // the cap only trips on inputs with no exact quotient
        let cap = 4 * (self.num_terms() + q.num_terms()) + 1024;
        for _ in 0..cap {
            if rem.is_zero() {
                return Ok(quot);
            }
            let (lr_m, lr_c) = rem.leading_term().unwrap();
            if (lr_c % &lq_c) != BigInt::zero() {
                return Err(Error::ExactDivisionFailed);
            }
            let t_m = lr_m.div(&lq_m);
            let t_c = lr_c / &lq_c;
            quot.add_term(t_m.clone(), t_c.clone());
            let piece = q.mul_monomial(&t_m).scale(&t_c);
            rem = rem.sub(&piece);
        }
        Err(Error::ExactDivisionFailed)
    }

    /// Ring-homomorphic substitution. Variables with a mapped image are
    /// replaced; unmapped variables pass through. A mapped variable that
    /// occurs with a negative exponent must have a monomial image.
    pub fn substitute(&self, image: &BTreeMap<VarKey, LaurentPoly>) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::default();
        for (m, c) in self.terms() {
            let mut passthrough = Monomial::one();
            let mut acc = LaurentPoly::constant(c.clone());
            for (&k, &e) in m.powers() {
                match image.get(&k) {
                    None => passthrough.mul_var(k, e),
                    Some(img) => {
                        if e >= 0 {
                            for _ in 0..e {
                                acc = acc.mul(img);
                            }
                        } else {
                            let single = if img.num_terms() == 1 {
                                img.terms().next().map(|(m, c)| (m.clone(), c.clone()))
                            } else {
                                None
                            };
                            match single {
                                Some((im, ic)) if ic == BigInt::one() => {
                                    acc = acc.mul_monomial(&im.pow(e));
                                }
                                _ => {
                                    return Err(Error::NegativePowerOfNonMonomial(k.to_string()))
                                }
                            }
                        }
                    }
                }
            }
            for (mm, cc) in acc.terms() {
                out.add_term(mm.mul(&passthrough), cc.clone());
            }
        }
        Ok(out)
    }

    /// Relabel every variable `(f, i, r)` as `(f, i, r + s)`.
    pub fn spectral_shift(&self, s: i64) -> LaurentPoly {
        LaurentPoly(
            self.0
                .iter()
                .map(|(m, c)| (m.spectral_shift(s), c.clone()))
                .collect(),
        )
    }

    /// Sum of all coefficients (every variable specialized to 1). For a
    /// q-character this is the dimension of the module.
    pub fn dimension(&self) -> BigInt {
        self.0.values().sum()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.0.values().all(|c| !c.is_negative())
    }

    /// Componentwise minimum exponent over all terms, per variable.
    pub fn min_exponents(&self) -> Monomial {
        let mut keys: BTreeMap<VarKey, i64> = BTreeMap::new();
        for (m, _) in self.terms() {
            for (&k, _) in m.powers() {
                keys.entry(k).or_insert(i64::MAX);
            }
        }
        for (m, _) in self.terms() {
            for (k, min) in keys.iter_mut() {
                *min = (*min).min(m.exponent(k));
            }
        }
        Monomial::from_powers(keys)
    }

    // ---- serialization ----

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms()
                .map(|(m, c)| {
                    let mono: serde_json::Map<String, serde_json::Value> = m
                        .powers()
                        .map(|(k, &e)| (k.to_string(), serde_json::Value::from(e)))
                        .collect();
                    serde_json::json!({"coeff": c.to_string(), "monomial": mono})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LaurentPoly> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::PolyParse("expected array of terms".into()))?;
        let mut p = LaurentPoly::default();
        for t in arr {
            let coeff = t
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::PolyParse("term missing coeff string".into()))?;
            let coeff: BigInt = coeff
                .parse()
                .map_err(|_| Error::PolyParse(format!("bad coefficient `{coeff}`")))?;
            let mono = t
                .get("monomial")
                .and_then(|m| m.as_object())
                .ok_or_else(|| Error::PolyParse("term missing monomial object".into()))?;
            let mut m = Monomial::one();
            for (k, e) in mono {
                let key: VarKey = k.parse()?;
                let e = e
                    .as_i64()
                    .ok_or_else(|| Error::PolyParse(format!("bad exponent for {k}")))?;
                m.mul_var(key, e);
            }
            p.add_term(m, coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() && !m.is_one() {
                write!(f, "{m}")?;
            } else if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = Error;

    /// Parse the text form, e.g. `3*Y[1,-2]^2*Y[2,1]^-1 + Y[1,0] - 2`.
    fn from_str(s: &str) -> Result<LaurentPoly> {
        let mut p = LaurentPoly::default();
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(p);
        }
        // split into signed chunks; '-' inside brackets or right after '^'
        // belongs to an index or exponent, not to a new term
        let mut chunks: Vec<(i32, String)> = Vec::new();
        let mut sign = 1;
        let mut cur = String::new();
        let mut depth = 0usize;
        let mut prev_sig = ' ';
        for ch in s.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 && prev_sig != '^' => {
                    if cur.trim().is_empty() {
                        if ch == '-' {
                            sign = -sign;
                        }
                    } else {
                        chunks.push((sign, std::mem::take(&mut cur)));
                        sign = if ch == '-' { -1 } else { 1 };
                    }
                }
                _ => cur.push(ch),
            }
            if !ch.is_whitespace() && ch != '+' && ch != '-' {
                prev_sig = ch;
            }
        }
        if !cur.trim().is_empty() {
            chunks.push((sign, cur));
        }
        for (sg, chunk) in chunks {
            let mut coeff = BigInt::from(sg);
            let mut mono = Monomial::one();
            for factor in chunk.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    continue;
                }
                if factor.chars().next().unwrap().is_ascii_digit() {
                    let c: BigInt = factor
                        .parse()
                        .map_err(|_| Error::PolyParse(format!("bad factor `{factor}`")))?;
                    coeff *= c;
                } else {
                    let (var, exp) = match factor.split_once('^') {
                        Some((v, e)) => (
                            v,
                            e.parse::<i64>()
                                .map_err(|_| Error::PolyParse(format!("bad exponent `{e}`")))?,
                        ),
                        None => (factor, 1),
                    };
                    mono.mul_var(var.trim().parse()?, exp);
                }
            }
            p.add_term(mono, coeff);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(i: usize, r: i64) -> LaurentPoly {
        LaurentPoly::var(VarKey::y(i, r))
    }

    fn yinv(i: usize, r: i64) -> LaurentPoly {
        LaurentPoly::monomial(Monomial::var(VarKey::y(i, r)).inv(), BigInt::one())
    }

    #[test]
    fn add_cancels() {
        let p = y(1, 0);
        assert!(p.add(&p.neg()).is_zero());
    }

    #[test]
    fn mul_identity() {
        let p = y(1, 0).add(&yinv(1, 2));
        assert_eq!(p.mul(&LaurentPoly::one()), p);
    }

    #[test]
    fn difference_of_squares() {
        let a = y(1, 0).add(&yinv(1, 2));
        let b = y(1, 0).sub(&yinv(1, 2));
        let mut expect = LaurentPoly::default();
        expect.add_term(Monomial::var(VarKey::y(1, 0)).pow(2), BigInt::one());
        expect.add_term(Monomial::var(VarKey::y(1, 2)).pow(-2), BigInt::from(-1));
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn exact_div_monomial() {
        let p = y(1, 0).mul(&y(1, 2));
        assert_eq!(p.exact_div(&y(1, 2)).unwrap(), y(1, 0));
    }

    #[test]
    fn exact_div_binomial() {
        let a = y(1, 0).add(&yinv(1, 2));
        let b = y(1, 0).sub(&yinv(1, 2));
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
    }

    #[test]
    fn exact_div_fails() {
        let p = y(1, 0).add(&LaurentPoly::one());
        let q = y(1, 0).add(&LaurentPoly::constant(2));
        assert!(matches!(p.exact_div(&q), Err(Error::ExactDivisionFailed)));
        assert!(matches!(
            p.exact_div(&LaurentPoly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn substitute_monomial_image() {
        // v[1,2] -> z[2,1] z[1,4] z[1,0]^-1 z[2,3]^-1
        let img = LaurentPoly::monomial(
            Monomial::from_powers([
                (VarKey::z(2, 1), 1),
                (VarKey::z(1, 4), 1),
                (VarKey::z(1, 0), -1),
                (VarKey::z(2, 3), -1),
            ]),
            BigInt::one(),
        );
        let p = LaurentPoly::var(VarKey::v(1, 2));
        let mut map = BTreeMap::new();
        map.insert(VarKey::v(1, 2), img.clone());
        assert_eq!(p.substitute(&map).unwrap(), img);
    }

    #[test]
    fn substitute_identity_and_negative_power() {
        let p = y(1, 0).add(&yinv(1, 2));
        assert_eq!(p.substitute(&BTreeMap::new()).unwrap(), p);
        let mut map = BTreeMap::new();
        map.insert(VarKey::y(1, 0), LaurentPoly::one().add(&y(2, 1)));
        let q = yinv(1, 0);
        assert!(matches!(
            q.substitute(&map),
            Err(Error::NegativePowerOfNonMonomial(_))
        ));
    }

    #[test]
    fn spectral_shift_examples() {
        let p = y(1, 0).add(&yinv(1, 2));
        let expect = y(1, 2).add(&yinv(1, 4));
        assert_eq!(p.spectral_shift(2), expect);
        assert_eq!(p.spectral_shift(0), p);
        assert_eq!(p.spectral_shift(5).spectral_shift(-5), p);
    }

    #[test]
    fn dimension_examples() {
        let p = y(1, 0).add(&yinv(1, 2));
        assert_eq!(p.dimension(), BigInt::from(2));
        assert_eq!(LaurentPoly::zero().dimension(), BigInt::zero());
        let v2 = "Y[1,0]*Y[1,2] + Y[1,0]*Y[1,4]^-1 + Y[1,2]^-1*Y[1,4]^-1"
            .parse::<LaurentPoly>()
            .unwrap();
        assert_eq!(v2.dimension(), BigInt::from(3));
    }

    #[test]
    fn text_roundtrip() {
        let samples = [
            "3*Y[1,-2]^2*Y[2,1]^-1 + Y[1,0] - 2",
            "0",
            "-Y[1,0] + z[2,3]^-4",
            "1",
        ];
        for s in samples {
            let p: LaurentPoly = s.parse().unwrap();
            let printed = p.to_string();
            let q: LaurentPoly = printed.parse().unwrap();
            assert_eq!(p, q);
            assert_eq!(printed, q.to_string());
        }
    }

    #[test]
    fn json_roundtrip() {
        let p: LaurentPoly = "3*Y[1,-2]^2*Y[2,1]^-1 + Y[1,0] - 2".parse().unwrap();
        let v = p.to_json();
        assert_eq!(LaurentPoly::from_json(&v).unwrap(), p);
    }
}

//! Quivers with potential: the oriented cycles of the infinite quiver,
//! cyclic-derivative relations, thin representations, F-polynomials, and the
//! geometric q-character formula for fundamental modules.

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial, VarKey};
use crate::quiver::{arrows_from, arrows_into, in_component, Vertex};
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub type Arrow = (Vertex, Vertex);

/// A composable sequence of arrows, stored in traversal order (the first
/// arrow is applied first).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PathWord(pub Vec<Arrow>);

impl PathWord {
    pub fn source(&self) -> Vertex {
        self.0.first().expect("nonempty path").0
    }

    pub fn target(&self) -> Vertex {
        self.0.last().expect("nonempty path").1
    }

    pub fn is_composable(&self) -> bool {
        !self.0.is_empty() && self.0.windows(2).all(|w| w[0].1 == w[1].0)
    }
}

/// An integer combination of paths with common source and target.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub terms: Vec<(i64, PathWord)>,
}

/// The oriented cycle through `(i, r)` and its neighbour `j`:
/// `(i,r) -> (j, r+b_ij) -> (i, r+2b_ij) -> ... vertical ... -> (i,r)`,
/// with `-c_ij` vertical steps of size `b_ii`.
pub fn potential_cycle(cd: &CartanData, i: usize, j: usize, r: i64) -> Result<PathWord> {
    cd.check_node(i)?;
    cd.check_node(j)?;
    if cd.c(i, j) >= 0 {
        return Err(Error::NotAdjacent(i, j));
    }
    let bij = cd.b(i, j);
    let bii = cd.b(i, i);
    let mut arrows = vec![
        (Vertex::new(i, r), Vertex::new(j, r + bij)),
        (Vertex::new(j, r + bij), Vertex::new(i, r + 2 * bij)),
    ];
    let steps = -cd.c(i, j);
    let mut s = r + 2 * bij;
    for _ in 0..steps {
        arrows.push((Vertex::new(i, s), Vertex::new(i, s + bii)));
        s += bii;
    }
    debug_assert_eq!(s, r);
    let path = PathWord(arrows);
    debug_assert!(path.is_composable());
    Ok(path)
}

/// All potential cycles containing the arrow `a`.
pub fn cycles_through(cd: &CartanData, a: Arrow) -> Vec<PathWord> {
    let (u, v) = a;
    let mut cycles = Vec::new();
    if u.i != v.i {
        // cross arrow: the first arrow of gamma_{u.i, v.i, u.r} and the
        // second arrow of gamma_{v.i, u.i, u.r - b_ij}
        if cd.c(u.i, v.i) < 0 {
            cycles.push(potential_cycle(cd, u.i, v.i, u.r).unwrap());
            cycles.push(potential_cycle(cd, v.i, u.i, u.r - cd.b(u.i, v.i)).unwrap());
        }
    } else {
        // vertical arrow in column i: position m of gamma_{i,j,r} for every
        // neighbour j and every admissible offset
        let i = u.i;
        for j in cd.nodes() {
            if cd.c(i, j) < 0 {
                let bij = cd.b(i, j);
                for m in 0..(-cd.c(i, j)) {
                    let r = u.r - 2 * bij - m * cd.b(i, i);
                    cycles.push(potential_cycle(cd, i, j, r).unwrap());
                }
            }
        }
    }
    cycles
}

/// The cyclic derivative of the potential with respect to arrow `a`: the sum
/// of the complement paths of all cycles through `a`.
pub fn cyclic_derivative(cd: &CartanData, a: Arrow) -> Option<Relation> {
    let mut terms = Vec::new();
    for cycle in cycles_through(cd, a) {
        for (p, &arrow) in cycle.0.iter().enumerate() {
            if arrow == a {
                let mut rest: Vec<Arrow> = cycle.0[p + 1..].to_vec();
                rest.extend_from_slice(&cycle.0[..p]);
                terms.push((1, PathWord(rest)));
            }
        }
    }
    if terms.is_empty() {
        None
    } else {
        Some(Relation { terms })
    }
}

/// All cyclic-derivative relations for arrows whose endpoints lie in the
/// given shift window.
pub fn relations(cd: &CartanData, window: (i64, i64)) -> Vec<Relation> {
    let (lo, hi) = window;
    let mut out = Vec::new();
    for i in cd.nodes() {
        for r in lo..=hi {
            let v = Vertex::new(i, r);
            for w in arrows_from(cd, v) {
                if w.r >= lo && w.r <= hi {
                    if let Some(rel) = cyclic_derivative(cd, (v, w)) {
                        out.push(rel);
                    }
                }
            }
        }
    }
    out
}

/// A representation of the infinite quiver with every vertex space of
/// dimension at most one; absent arrows act by zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThinRep {
    pub support: BTreeSet<Vertex>,
    pub arrowvals: BTreeMap<Arrow, Rational64>,
}

impl ThinRep {
    pub fn simple(v: Vertex) -> ThinRep {
        ThinRep { support: [v].into_iter().collect(), arrowvals: BTreeMap::new() }
    }

    pub fn with_unit_arrows(support: &[Vertex], arrows: &[Arrow]) -> ThinRep {
        ThinRep {
            support: support.iter().copied().collect(),
            arrowvals: arrows.iter().map(|&a| (a, Rational64::one())).collect(),
        }
    }

    fn arrow_value(&self, a: &Arrow) -> Rational64 {
        if !self.support.contains(&a.0) || !self.support.contains(&a.1) {
            return Rational64::zero();
        }
        self.arrowvals.get(a).copied().unwrap_or_else(Rational64::zero)
    }

    fn path_value(&self, p: &PathWord) -> Rational64 {
        let mut acc = Rational64::one();
        for a in &p.0 {
            let v = self.arrow_value(a);
            if v.is_zero() {
                return Rational64::zero();
            }
            acc *= v;
        }
        acc
    }

    /// Shift window that covers the support plus the longest relation.
    fn relation_window(&self, cd: &CartanData) -> (i64, i64) {
        let lo = self.support.iter().map(|v| v.r).min().unwrap_or(0);
        let hi = self.support.iter().map(|v| v.r).max().unwrap_or(0);
        let slack = 4 * cd.t * cd.rank() as i64 + 4;
        (lo - slack, hi + slack)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let support: Vec<_> = self.support.iter().map(|v| vec![v.i as i64, v.r]).collect();
        let arrows: Vec<_> = self
            .arrowvals
            .iter()
            .map(|((s, d), val)| {
                serde_json::json!({
                    "from": [s.i, s.r],
                    "to": [d.i, d.r],
                    "scalar": format!("{}/{}", val.numer(), val.denom()),
                })
            })
            .collect();
        serde_json::json!({"support": support, "arrows": arrows})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ThinRep> {
        let err = |m: &str| Error::Config(format!("bad representation file: {m}"));
        let parse_vertex = |x: &serde_json::Value| -> Result<Vertex> {
            let pair = x.as_array().filter(|a| a.len() == 2).ok_or_else(|| err("vertex"))?;
            Ok(Vertex::new(
                pair[0].as_u64().ok_or_else(|| err("vertex node"))? as usize,
                pair[1].as_i64().ok_or_else(|| err("vertex shift"))?,
            ))
        };
        let mut rep = ThinRep::default();
        for x in v.get("support").and_then(|s| s.as_array()).ok_or_else(|| err("support"))? {
            rep.support.insert(parse_vertex(x)?);
        }
        for x in v.get("arrows").and_then(|s| s.as_array()).ok_or_else(|| err("arrows"))? {
            let from = parse_vertex(x.get("from").ok_or_else(|| err("arrow from"))?)?;
            let to = parse_vertex(x.get("to").ok_or_else(|| err("arrow to"))?)?;
            let scalar = x.get("scalar").and_then(|s| s.as_str()).unwrap_or("1/1");
            let (num, den) = scalar.split_once('/').unwrap_or((scalar, "1"));
            let val = Rational64::new(
                num.trim().parse().map_err(|_| err("scalar"))?,
                den.trim().parse().map_err(|_| err("scalar"))?,
            );
            if val.is_zero() {
                return Err(err("zero arrow scalar"));
            }
            rep.arrowvals.insert((from, to), val);
        }
        Ok(rep)
    }
}

/// True iff every cyclic-derivative relation vanishes on the representation.
pub fn check_relations(rep: &ThinRep, cd: &CartanData) -> bool {
    let window = rep.relation_window(cd);
    for rel in relations(cd, window) {
        let mut total = Rational64::zero();
        for (coeff, path) in &rel.terms {
            total += Rational64::from_integer(*coeff) * rep.path_value(path);
        }
        if !total.is_zero() {
            return false;
        }
    }
    true
}

/// The F-polynomial of a thin representation: every subrepresentation is a
/// coordinate subspace, i.e. a subset of the support closed under nonzero
/// arrows, and contributes its dimension-vector monomial with coefficient 1.
pub fn f_polynomial(rep: &ThinRep) -> Result<LaurentPoly> {
    let verts: Vec<Vertex> = rep.support.iter().copied().collect();
    let n = verts.len();
    if n > 24 {
        return Err(Error::Config(format!("support too large for enumeration: {n}")));
    }
    let index: BTreeMap<Vertex, usize> = verts.iter().copied().enumerate().map(|(a, b)| (b, a)).collect();
    // successor masks under nonzero arrows
    let mut succ = vec![0u32; n];
    for (a, val) in &rep.arrowvals {
        if !val.is_zero() {
            if let (Some(&s), Some(&d)) = (index.get(&a.0), index.get(&a.1)) {
                succ[s] |= 1 << d;
            }
        }
    }
    let mut f = LaurentPoly::zero();
    for mask in 0u32..(1 << n) {
        let closed = (0..n).all(|s| (mask >> s) & 1 == 0 || (succ[s] & !mask) == 0);
        if closed {
            let m = Monomial::from_powers(
                (0..n)
                    .filter(|s| (mask >> s) & 1 == 1)
                    .map(|s| (VarKey::v(verts[s].i, verts[s].r), 1)),
            );
            f.add_term(m, BigInt::one());
        }
    }
    Ok(f)
}

/// Closed subsets of the support (the points of the quiver Grassmannians).
pub fn closed_subsets(rep: &ThinRep) -> Vec<BTreeSet<Vertex>> {
    let f = f_polynomial(rep).expect("support small enough");
    f.terms()
        .map(|(m, _)| {
            m.powers()
                .map(|(k, _)| Vertex::new(k.node, k.shift))
                .collect()
        })
        .collect()
}

/// The monomial `yhat_{(i,r)}`: product of `z` over arrow targets of the
/// vertex divided by the product over arrow sources.
pub fn yhat(cd: &CartanData, v: Vertex) -> Monomial {
    let mut m = Monomial::one();
    for w in arrows_from(cd, v) {
        m.mul_var(VarKey::z(w.i, w.r), 1);
    }
    for w in arrows_into(cd, v) {
        m.mul_var(VarKey::z(w.i, w.r), -1);
    }
    m
}

/// Convert a z-monomial to the unique Y-monomial with
/// `Y[j, s-d_j] -> z[j, s-2d_j] / z[j, s]`, by telescoping each node column.
pub fn z_to_y(cd: &CartanData, m: &Monomial) -> Result<Monomial> {
    // split exponents per node
    let mut columns: BTreeMap<usize, BTreeMap<i64, i64>> = BTreeMap::new();
    for (k, &e) in m.powers() {
        if k.family != crate::laurent::VarFamily::Z {
            return Err(Error::NotInImageLattice);
        }
        columns.entry(k.node).or_default().insert(k.shift, e);
    }
    let mut out = Monomial::one();
    for (node, col) in columns {
        let step = 2 * cd.d(node);
        // e(s + step) = e(s) + f(s), cumulated per residue class
        let mut residues: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
        for (&s, &e) in &col {
            residues.entry(s.rem_euclid(step)).or_default().push((s, e));
        }
        for (_, entries) in residues {
            // with Y[j, u - d_j] standing for z[j, u - 2d_j]/z[j, u], the Y
            // exponent at u is the prefix sum of the z exponents below u
            let mut acc = 0i64;
            let mut iter = entries.iter().peekable();
            while let Some(&(s, f)) = iter.next() {
                acc += f;
                match iter.peek() {
                    Some(&&(next, _)) => {
                        if acc != 0 {
                            let mut u = s + step;
                            while u <= next {
                                out.mul_var(VarKey::y(node, u - cd.d(node)), acc);
                                u += step;
                            }
                        }
                    }
                    None => {
                        if acc != 0 {
                            return Err(Error::NotInImageLattice);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Built-in modules `K_{(i,r)}` for the types where the module structure is
/// known explicitly (A1, A2, B2); all arrow scalars are 1.
pub fn builtin_k(cd: &CartanData, i: usize, r: i64) -> Result<ThinRep> {
    cd.check_node(i)?;
    let label = cd.label.to_string();
    let vx = Vertex::new;
    match label.as_str() {
        "A1" => Ok(ThinRep::simple(vx(1, r))),
        "A2" => {
            let j = 3 - i;
            Ok(ThinRep::with_unit_arrows(
                &[vx(i, r), vx(j, r + 1)],
                &[(vx(j, r + 1), vx(i, r))],
            ))
        }
        "B2" => match i {
            1 => Ok(ThinRep::with_unit_arrows(
                &[vx(1, r), vx(2, r + 2), vx(2, r), vx(1, r + 2)],
                &[
                    (vx(2, r + 2), vx(1, r)),
                    (vx(2, r), vx(2, r + 2)),
                    (vx(1, r + 2), vx(2, r)),
                ],
            )),
            2 => Ok(ThinRep::with_unit_arrows(
                &[vx(2, r), vx(1, r + 2), vx(2, r + 4)],
                &[(vx(2, r + 4), vx(1, r + 2)), (vx(1, r + 2), vx(2, r))],
            )),
            _ => unreachable!(),
        },
        _ => Err(Error::UnsupportedType(label)),
    }
}

/// Types with built-in `K` modules.
pub fn has_builtin_k(cd: &CartanData) -> bool {
    matches!(cd.label.to_string().as_str(), "A1" | "A2" | "B2")
}

/// The geometric q-character formula: substitute `v` variables of the
/// F-polynomial by `yhat` monomials, convert every z-monomial to the Y
/// variables, and multiply by the highest-weight variable `Y[i, r-d_i]`.
pub fn geometric_qchar(cd: &CartanData, i: usize, r: i64, k_module: &ThinRep) -> Result<LaurentPoly> {
    let f = f_polynomial(k_module)?;
    let top = Monomial::var(VarKey::y(i, r - cd.d(i)));
    let mut out = LaurentPoly::zero();
    for (m, c) in f.terms() {
        let mut zmono = Monomial::one();
        for (k, &e) in m.powers() {
            zmono = zmono.mul(&yhat(cd, Vertex::new(k.node, k.shift)).pow(e));
        }
        let ymono = z_to_y(cd, &zmono)?;
        out.add_term(ymono.mul(&top), c.clone());
    }
    Ok(out)
}

/// A finite direct sum of thin representations. F-polynomials are
/// multiplicative on direct sums, so the F-polynomial of a sum is the
/// product of the summands'.
#[derive(Clone, Debug, Default)]
pub struct RepSum(pub Vec<ThinRep>);

impl RepSum {
    pub fn direct_sum(mut self, rep: ThinRep) -> RepSum {
        self.0.push(rep);
        self
    }

    pub fn f_polynomial(&self) -> Result<LaurentPoly> {
        let mut f = LaurentPoly::one();
        for rep in &self.0 {
            f = f.mul(&f_polynomial(rep)?);
        }
        Ok(f)
    }
}

/// Check that `(i, r)` lies on the lattice of the component of `anchor`.
pub fn on_component_lattice(cd: &CartanData, anchor: Vertex, i: usize, r: i64) -> bool {
    in_component(cd, anchor, Vertex::new(i, r))
}

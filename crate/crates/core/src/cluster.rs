//! Seeds, quiver mutation, exchange relations, closure enumeration,
//! denominator vectors, and the realization of cluster variables as
//! q-characters.

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial, VarKey};
use crate::quiver::{truncated_quiver, QuiverGraph, TruncationParams, Vertex};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// A cluster variable in reduced form: a polynomial numerator over a
/// monomial denominator, with no variable dividing both.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ClusterVar {
    num: LaurentPoly,
    den: Monomial,
}

fn zkey(v: Vertex) -> VarKey {
    VarKey::z(v.i, v.r)
}

impl ClusterVar {
    /// Canonicalize a numerator/denominator pair: per variable, cancel the
    /// common power and push any negative numerator exponents into the
    /// denominator. Panics if the denominator ends up non-monomial or
    /// negative, i.e. if the Laurent phenomenon fails.
    pub fn reduced(num: LaurentPoly, den: Monomial) -> ClusterVar {
        assert!(!num.is_zero(), "cluster variable numerator is zero");
        let mins = num.min_exponents();
        let mut cancel = Monomial::one();
        for (k, &m) in mins.powers() {
            let c = m.min(den.exponent(k));
            cancel.mul_var(*k, c);
        }
        let num = num.mul_monomial(&cancel.inv());
        let den = den.div(&cancel);
        assert!(
            den.powers().all(|(_, &e)| e > 0),
            "denominator not a monomial: Laurent phenomenon violated"
        );
        assert!(num.min_exponents().powers().all(|(_, &e)| e >= 0));
        ClusterVar { num, den }
    }

    /// The initial variable attached to a vertex.
    pub fn initial(v: Vertex) -> ClusterVar {
        ClusterVar { num: LaurentPoly::var(zkey(v)), den: Monomial::one() }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &Monomial {
        &self.den
    }

    /// The variable as a single Laurent polynomial.
    pub fn as_laurent(&self) -> LaurentPoly {
        self.num.mul_monomial(&self.den.inv())
    }

    pub fn mul(&self, other: &ClusterVar) -> ClusterVar {
        ClusterVar::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Substitute each initial variable by its table entry and clear the
    /// denominator by exact division.
    pub fn realize_qchar(&self, table: &BTreeMap<Vertex, LaurentPoly>) -> Result<LaurentPoly> {
        let image: BTreeMap<VarKey, LaurentPoly> =
            table.iter().map(|(&v, p)| (zkey(v), p.clone())).collect();
        let num_img = self.num.substitute(&image)?;
        let mut den_img = LaurentPoly::one();
        for (k, &e) in self.den.powers() {
            let p = image
                .get(k)
                .ok_or_else(|| Error::Config(format!("realization table missing {k}")))?;
            for _ in 0..e {
                den_img = den_img.mul(p);
            }
        }
        num_img.exact_div(&den_img)
    }
}

impl fmt::Display for ClusterVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / {}", self.num, self.den)
        }
    }
}

/// A seed: a quiver together with a cluster variable attached to every
/// vertex. Seeds are immutable; mutation returns a new seed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Seed {
    pub quiver: QuiverGraph,
    pub attach: BTreeMap<Vertex, ClusterVar>,
}

impl Seed {
    /// The multiset of attachments, the identity used for closure counting.
    fn cluster_key(&self) -> Vec<ClusterVar> {
        let mut key: Vec<ClusterVar> = self.attach.values().cloned().collect();
        key.sort();
        key
    }

    pub fn to_json(&self) -> serde_json::Value {
        let attach: Vec<_> = self
            .attach
            .iter()
            .map(|(v, x)| {
                serde_json::json!({
                    "vertex": [v.i, v.r],
                    "numerator": x.num.to_json(),
                    "denominator": x.den.to_string(),
                })
            })
            .collect();
        serde_json::json!({"quiver": self.quiver.to_json(), "attach": attach})
    }
}

/// The initial seed `(z_ell, Gamma_ell)` of the truncated quiver.
pub fn initial_seed(cd: &CartanData, params: &TruncationParams) -> Result<Seed> {
    let quiver = truncated_quiver(cd, params)?;
    let attach = quiver
        .vertices
        .iter()
        .map(|&v| (v, ClusterVar::initial(v)))
        .collect();
    Ok(Seed { quiver, attach })
}

/// The three-step quiver mutation rule at `k`: compose paths through `k`,
/// cancel opposite arrow pairs, reverse the arrows at `k`. Arrows between
/// frozen vertices are kept.
pub fn mutate_quiver(g: &QuiverGraph, k: Vertex) -> QuiverGraph {
    let mut out = g.clone();
    for (u, p) in g.arrows_into(k) {
        for (w, q) in g.arrows_out_of(k) {
            out.add_arrow(u, w, p * q);
        }
    }
    for (u, p) in g.arrows_into(k) {
        out.add_arrow(u, k, -p);
        out.add_arrow(k, u, p);
    }
    for (w, q) in g.arrows_out_of(k) {
        out.add_arrow(k, w, -q);
        out.add_arrow(w, k, q);
    }
    // cancel 2-cycles created by the composition step
    let pairs: Vec<(Vertex, Vertex)> = out
        .arrows
        .keys()
        .filter(|&&(a, b)| a < b && out.arrows.contains_key(&(b, a)))
        .copied()
        .collect();
    for (a, b) in pairs {
        let m = out.arrows[&(a, b)].min(out.arrows[&(b, a)]);
        out.add_arrow(a, b, -m);
        out.add_arrow(b, a, -m);
    }
    out
}

/// Mutation at a mutable vertex: the quiver is mutated by the three-step
/// rule and the attachment at `k` is replaced via the exchange relation
/// `x_k * x_k' = prod_{u -> k} attach(u) + prod_{k -> w} attach(w)`.
pub fn mutate(s: &Seed, k: Vertex) -> Result<Seed> {
    if !s.quiver.vertices.contains(&k) {
        return Err(Error::UnknownVertex(k));
    }
    if s.quiver.frozen.contains(&k) {
        return Err(Error::FrozenVertex(k));
    }
    let product = |arrows: Vec<(Vertex, i64)>| -> (LaurentPoly, Monomial) {
        let mut num = LaurentPoly::one();
        let mut den = Monomial::one();
        for (v, mult) in arrows {
            let x = &s.attach[&v];
            for _ in 0..mult {
                num = num.mul(&x.num);
                den = den.mul(&x.den);
            }
        }
        (num, den)
    };
    let (in_num, in_den) = product(s.quiver.arrows_into(k));
    let (out_num, out_den) = product(s.quiver.arrows_out_of(k));
    // common denominator: componentwise max of the two monomials
    let mut common = in_den.clone();
    for (key, &e) in out_den.powers() {
        let have = common.exponent(key);
        if e > have {
            common.mul_var(*key, e - have);
        }
    }
    let sum = in_num
        .mul_monomial(&common.div(&in_den))
        .add(&out_num.mul_monomial(&common.div(&out_den)));
    let xk = &s.attach[&k];
    // x_k' = sum / common / (num_k / den_k)
    let quot = sum.exact_div(&xk.num).expect("exchange relation not divisible");
    let new_var = ClusterVar::reduced(quot.mul_monomial(&xk.den), common);

    let mut attach = s.attach.clone();
    attach.insert(k, new_var);
    let quiver = mutate_quiver(&s.quiver, k);
    debug_assert!(quiver.check_no_loops_or_two_cycles());
    Ok(Seed { quiver, attach })
}

/// Result of a breadth-first closure enumeration.
#[derive(Clone, Debug)]
pub struct ClosureResult {
    /// all cluster variables seen at mutable vertices
    pub variables: BTreeSet<ClusterVar>,
    /// the frozen attachments (constant across seeds)
    pub frozen: BTreeSet<ClusterVar>,
    pub seed_count: usize,
    pub closed: bool,
}

/// Breadth-first closure of a seed under mutation at every mutable vertex,
/// identifying seeds by their attachment multisets. Stops at `max_seeds`
/// distinct seeds and reports `closed = false` when the cap is hit.
pub fn enumerate_closure(s: &Seed, max_seeds: usize) -> ClosureResult {
    assert!(max_seeds >= 1);
    let mut variables = BTreeSet::new();
    let frozen: BTreeSet<ClusterVar> = s
        .quiver
        .frozen
        .iter()
        .map(|v| s.attach[v].clone())
        .collect();
    let mut seen: BTreeSet<Vec<ClusterVar>> = BTreeSet::new();
    let mut queue: VecDeque<Seed> = VecDeque::new();
    seen.insert(s.cluster_key());
    queue.push_back(s.clone());
    let mut closed = true;
    while let Some(seed) = queue.pop_front() {
        for (v, x) in &seed.attach {
            if !seed.quiver.frozen.contains(v) {
                variables.insert(x.clone());
            }
        }
        let mutable: Vec<Vertex> = seed.quiver.mutable_vertices().copied().collect();
        for k in mutable {
            let next = mutate(&seed, k).expect("mutable vertex");
            if !seen.contains(&next.cluster_key()) {
                if seen.len() >= max_seeds {
                    closed = false;
                    continue;
                }
                seen.insert(next.cluster_key());
                queue.push_back(next);
            }
        }
    }
    ClosureResult { variables, frozen, seed_count: seen.len(), closed }
}

/// The denominator vector of `x` with respect to the initial seed `s0`,
/// indexed by the mutable vertices in order. Initial variables get the
/// negative unit vector.
pub fn denominator_vector(x: &ClusterVar, s0: &Seed) -> Vec<i64> {
    let mins = x.num.min_exponents();
    s0.quiver
        .mutable_vertices()
        .map(|&v| {
            let k = zkey(v);
            x.den.exponent(&k) - mins.exponent(&k)
        })
        .collect()
}

/// Directed-graph isomorphism test that respects the frozen/mutable split
/// and ignores arrows between frozen vertices. Brute force over bijections;
/// intended for the small figure-sized quivers.
pub fn isomorphic_ignoring_frozen_arrows(a: &QuiverGraph, b: &QuiverGraph) -> bool {
    let am: Vec<Vertex> = a.mutable_vertices().copied().collect();
    let bm: Vec<Vertex> = b.mutable_vertices().copied().collect();
    let af: Vec<Vertex> = a.frozen.iter().copied().collect();
    let bf: Vec<Vertex> = b.frozen.iter().copied().collect();
    if am.len() != bm.len() || af.len() != bf.len() {
        return false;
    }
    let stripped = |g: &QuiverGraph| -> BTreeMap<(Vertex, Vertex), i64> {
        g.arrows
            .iter()
            .filter(|((s, d), _)| !(g.frozen.contains(s) && g.frozen.contains(d)))
            .map(|(&k, &m)| (k, m))
            .collect()
    };
    let aa = stripped(a);
    let ba = stripped(b);
    if aa.len() != ba.len() {
        return false;
    }
    fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (i, x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, x.clone());
                out.push(tail);
            }
        }
        out
    }
    for pm in permutations(&bm) {
        for pf in permutations(&bf) {
            let map: BTreeMap<Vertex, Vertex> = am
                .iter()
                .copied()
                .zip(pm.iter().copied())
                .chain(af.iter().copied().zip(pf.iter().copied()))
                .collect();
            let ok = aa
                .iter()
                .all(|((s, d), m)| ba.get(&(map[s], map[d])) == Some(m))
                && aa.len() == ba.len();
            if ok {
                return true;
            }
        }
    }
    false
}

/// Multiply out a monomial in the initial variables into a ClusterVar.
pub fn cluster_monomial(vars: &[(ClusterVar, u32)]) -> ClusterVar {
    let mut acc = ClusterVar { num: LaurentPoly::constant(BigInt::one()), den: Monomial::one() };
    for (x, e) in vars {
        for _ in 0..*e {
            acc = acc.mul(x);
        }
    }
    acc
}

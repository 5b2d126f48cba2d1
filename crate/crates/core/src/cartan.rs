//! Cartan matrices, symmetrizers, and root/weight bookkeeping for the
//! simple Lie types.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A simple Lie type tag with its rank, e.g. `B3` or `G2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub family: char,
    pub rank: usize,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))?
            .to_ascii_uppercase();
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownLabel(s.to_string()))?;
        if !"ABCDEFG".contains(family) {
            return Err(Error::UnknownLabel(s.to_string()));
        }
        Ok(Label { family, rank })
    }
}

/// Cartan matrix `C`, symmetrizer `d`, and derived data for one type.
///
/// Node numbering: chain families are numbered along the chain with the
/// short root(s) last (so `B2` has `d = (2,1)` and `G2` has `d = (3,1)`,
/// matching the initial-seed figures); `D`/`E` use Bourbaki numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub label: Label,
    pub c: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub t: i64,
}

fn chain(n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
        if i + 1 < n {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    c
}

/// Build the Cartan data for a valid type/rank pair.
pub fn cartan_from_label(label: Label) -> Result<CartanData> {
    let Label { family, rank: n } = label;
    let bad = || Error::RankOutOfRange { family, rank: n };
    let (c, d) = match family {
        'A' => {
            if n < 1 {
                return Err(bad());
            }
            (chain(n), vec![1; n])
        }
        'B' => {
            if n < 2 {
                return Err(bad());
            }
            let mut c = chain(n);
            c[n - 1][n - 2] = -2;
            let mut d = vec![2; n];
            d[n - 1] = 1;
            (c, d)
        }
        'C' => {
            if n < 2 {
                return Err(bad());
            }
            let mut c = chain(n);
            c[n - 2][n - 1] = -2;
            let mut d = vec![1; n];
            d[n - 1] = 2;
            (c, d)
        }
        'D' => {
            if n < 4 {
                return Err(bad());
            }
            let mut c = chain(n - 1);
            for row in c.iter_mut() {
                row.push(0);
            }
            c.push(vec![0; n]);
            c[n - 1][n - 1] = 2;
            // node n hangs off node n-2
            c[n - 1][n - 3] = -1;
            c[n - 3][n - 1] = -1;
            (c, vec![1; n])
        }
        'E' => {
            if !(6..=8).contains(&n) {
                return Err(bad());
            }
            // Bourbaki: node 2 attached to node 4 of the chain 1-3-4-5-...
            let mut c = vec![vec![0i64; n]; n];
            for i in 0..n {
                c[i][i] = 2;
            }
            let mut link = |a: usize, b: usize| {
                c[a - 1][b - 1] = -1;
                c[b - 1][a - 1] = -1;
            };
            link(1, 3);
            link(3, 4);
            link(2, 4);
            for v in 4..n {
                link(v, v + 1);
            }
            (c, vec![1; n])
        }
        'F' => {
            if n != 4 {
                return Err(bad());
            }
            let mut c = chain(4);
            c[2][1] = -2;
            (c, vec![2, 2, 1, 1])
        }
        'G' => {
            if n != 2 {
                return Err(bad());
            }
            (vec![vec![2, -1], vec![-3, 2]], vec![3, 1])
        }
        _ => return Err(Error::UnknownLabel(label.to_string())),
    };
    let t = *d.iter().max().unwrap();
    Ok(CartanData { label, c, d, t })
}

impl CartanData {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Node indices, 1-based.
    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.rank()
    }

    /// Cartan matrix entry `c_ij`, 1-based indices.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i - 1][j - 1]
    }

    /// Symmetrizer entry `d_i`, 1-based.
    pub fn d(&self, i: usize) -> i64 {
        self.d[i - 1]
    }

    /// Symmetrized entry `b_ij = d_i c_ij`, 1-based.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.d(i) * self.c(i, j)
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i >= 1 && i <= self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(i))
        }
    }
}

/// The symmetric matrix `B = D C`.
pub fn symmetrized_matrix(cd: &CartanData) -> Vec<Vec<i64>> {
    (0..cd.rank())
        .map(|i| (0..cd.rank()).map(|j| cd.d[i] * cd.c[i][j]).collect())
        .collect()
}

/// Coordinates of the simple root `alpha_i` in the fundamental-weight
/// basis: the column `(c_ji)_j` of the Cartan matrix.
pub fn simple_root_coords(cd: &CartanData, i: usize) -> Result<Vec<i64>> {
    cd.check_node(i)?;
    Ok((1..=cd.rank()).map(|j| cd.c(j, i)).collect())
}

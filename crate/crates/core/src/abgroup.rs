//! Finite abelian groups `Z/d_1 x ... x Z/d_r` with `d_i | d_{i+1}`, and
//! their subgroups in canonical (Hermite normal form) coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{hermite_normal_form, Row};

/// Safety bound for subgroup enumeration.
pub const MAX_ENUM_ORDER: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianStructure {
    factors: Vec<u64>,
}

impl AbelianStructure {
    /// Invariant factors, each at least 2 and dividing the next.
    pub fn new(factors: Vec<u64>) -> Result<AbelianStructure> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::Precondition("invariant factors must be >= 2".into()));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Precondition(format!(
                "{factors:?} is not a divisibility chain"
            )));
        }
        Ok(AbelianStructure { factors })
    }

    /// The structure isomorphic to `Z/n_1 x ... x Z/n_k` for arbitrary moduli.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<AbelianStructure> {
        // invariant factors via prime-power decomposition
        let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
        for &n in orders {
            if n == 0 {
                return Err(Error::Precondition("cyclic order 0".into()));
            }
            for (p, e) in factorize(n) {
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, v)) => v.push(p.pow(e)),
                    None => by_prime.push((p, vec![p.pow(e)])),
                }
            }
        }
        let r = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; r];
        for (_, mut v) in by_prime {
            v.sort_unstable();
            for (i, pe) in v.iter().rev().enumerate() {
                factors[r - 1 - i] *= pe;
            }
        }
        AbelianStructure::new(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Componentwise reduction into `[0, d_i)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| x.rem_euclid(d as i64))
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y).rem_euclid(d as i64))
            .collect()
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| (x * k).rem_euclid(d as i64))
            .collect()
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d as i64).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::Dimension {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    fn relation_rows(&self) -> Vec<Row> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { self.factors[i] as i64 } else { 0 })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z/1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A subgroup, stored as the Hermite normal form of its preimage lattice in Z^r.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    structure: AbelianStructure,
    hnf: Vec<Row>,
    order: u64,
    index: u64,
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    /// By index, then canonical matrix.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.index, &self.hnf).cmp(&(other.index, &other.hnf))
    }
}

/// The subgroup generated by `generators` (reduced or not).
pub fn subgroup_generated(
    structure: &AbelianStructure,
    generators: &[Vec<i64>],
) -> Result<Subgroup> {
    for g in generators {
        structure.check_dim(g)?;
    }
    let mut rows: Vec<Row> = generators.iter().map(|g| structure.reduce(g)).collect();
    rows.extend(structure.relation_rows());
    Ok(Subgroup::from_hnf(
        structure.clone(),
        hermite_normal_form(&rows, structure.rank()),
    ))
}

impl Subgroup {
    fn from_hnf(structure: AbelianStructure, hnf: Vec<Row>) -> Subgroup {
        let index: u64 = hnf.iter().enumerate().map(|(i, r)| r[i] as u64).product();
        let order = structure.order() / index;
        Subgroup {
            structure,
            hnf,
            order,
            index,
        }
    }

    pub fn trivial(structure: &AbelianStructure) -> Subgroup {
        subgroup_generated(structure, &[]).expect("empty generator list")
    }

    pub fn full(structure: &AbelianStructure) -> Subgroup {
        let r = structure.rank();
        let gens: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        subgroup_generated(structure, &gens).expect("unit vectors")
    }

    pub fn structure(&self) -> &AbelianStructure {
        &self.structure
    }

    /// Canonical matrix (upper triangular, r x r).
    pub fn canonical_matrix(&self) -> &[Row] {
        &self.hnf
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `d_G = |group| / |G|`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Membership by back-substitution against the canonical basis.
    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        self.structure.check_dim(v)?;
        Ok(lattice_contains(&self.hnf, v))
    }

    /// Canonical generators: the non-zero canonical rows reduced into the group.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        self.hnf
            .iter()
            .map(|r| self.structure.reduce(r))
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect()
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        self.structure
            .elements()
            .into_iter()
            .filter(|v| lattice_contains(&self.hnf, v))
            .collect()
    }

    /// `gens=[(v..);(v..)]; order=k; index=d`
    pub fn text(&self) -> String {
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|g| {
                format!(
                    "({})",
                    g.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        format!(
            "gens=[{}]; order={}; index={}",
            gens.join(";"),
            self.order,
            self.index
        )
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

fn lattice_contains(hnf: &[Row], v: &[i64]) -> bool {
    let mut w = v.to_vec();
    for (i, row) in hnf.iter().enumerate() {
        let p = row[i];
        if w[i] % p != 0 {
            return false;
        }
        let q = w[i] / p;
        for (x, &y) in w.iter_mut().zip(row) {
            *x -= q * y;
        }
    }
    w.iter().all(|&x| x == 0)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Every lattice in HNF sitting between `diag(moduli) Z^r` and `Z^r`.
fn intermediate_lattices(moduli: &[i64]) -> Vec<Vec<Row>> {
    fn rec(moduli: &[i64], i: usize, rows: &mut Vec<Row>, out: &mut Vec<Vec<Row>>) {
        let r = moduli.len();
        if i == 0 {
            out.push(rows.clone());
            return;
        }
        let i = i - 1;
        // rows currently hold rows i+1..r (in order)
        for pivot in (1..=moduli[i]).filter(|d| moduli[i] % d == 0) {
            let ranges: Vec<i64> = rows
                .iter()
                .enumerate()
                .map(|(k, row)| row[i + 1 + k])
                .collect();
            let total: i64 = ranges.iter().product();
            for code in 0..total {
                let mut row = vec![0i64; r];
                row[i] = pivot;
                let mut c = code;
                for (k, &m) in ranges.iter().enumerate() {
                    row[i + 1 + k] = c % m;
                    c /= m;
                }
                let mut cand = Vec::with_capacity(rows.len() + 1);
                cand.push(row);
                cand.extend(rows.iter().cloned());
                // moduli[i] e_i must lie in the lattice spanned by rows i..r
                let mut e = vec![0i64; r];
                e[i] = moduli[i];
                let padded: Vec<Row> = (0..i)
                    .map(|j| {
                        let mut z = vec![0; r];
                        z[j] = 1;
                        z
                    })
                    .chain(cand.iter().cloned())
                    .collect();
                if !lattice_contains(&padded, &e) {
                    continue;
                }
                let mut next = cand;
                rec(moduli, i, &mut next, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(moduli, moduli.len(), &mut Vec::new(), &mut out);
    out
}

/// All subgroups, each exactly once, ordered by index and then canonical matrix.
///
/// Subgroups of each p-primary component are enumerated as intermediate
/// lattices; the full list is their direct products.
pub fn all_subgroups(structure: &AbelianStructure) -> Result<Vec<Subgroup>> {
    let order = structure.order();
    if order > MAX_ENUM_ORDER {
        return Err(Error::Precondition(format!(
            "group order {order} exceeds {MAX_ENUM_ORDER}"
        )));
    }
    let factors = structure.factors();
    // per prime: list of generator sets in full coordinates
    let mut per_prime: Vec<Vec<Vec<Vec<i64>>>> = Vec::new();
    for (p, _) in factorize(order) {
        let idx: Vec<usize> = (0..factors.len())
            .filter(|&i| factors[i] % p == 0)
            .collect();
        let moduli: Vec<i64> = idx
            .iter()
            .map(|&i| p.pow(valuation(factors[i], p)) as i64)
            .collect();
        let lattices = intermediate_lattices(&moduli);
        let embedded = lattices
            .into_iter()
            .map(|rows| {
                rows.into_iter()
                    .map(|w| {
                        let mut v = vec![0i64; factors.len()];
                        for (k, &i) in idx.iter().enumerate() {
                            let cof = (factors[i] / moduli[k] as u64) as i64;
                            v[i] = (w[k] * cof).rem_euclid(factors[i] as i64);
                        }
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        per_prime.push(embedded);
    }
    let mut combos: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    for choices in &per_prime {
        combos = combos
            .into_iter()
            .flat_map(|gens| {
                choices.iter().map(move |c| {
                    let mut g = gens.clone();
                    g.extend(c.iter().cloned());
                    g
                })
            })
            .collect();
    }
    let mut out = combos
        .iter()
        .map(|gens| subgroup_generated(structure, gens))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

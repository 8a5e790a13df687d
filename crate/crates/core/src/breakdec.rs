//! Break decomposition of modules over ℤ/ℓⁿ under a filtered p-group
//! action, cut out by central averaging idempotents.

use std::collections::BTreeSet;

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ramify::FiniteGroup;

/// The coefficient ring ℤ/ℓⁿ.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FinRing {
    pub ell: u64,
    pub n: u32,
    modulus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("ℓ = {0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    BadExponent,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FinRing {
    pub fn new(ell: u64, n: u32) -> Result<Self, RingError> {
        if !is_prime(ell) {
            return Err(RingError::NotPrime(ell));
        }
        if n == 0 {
            return Err(RingError::BadExponent);
        }
        let modulus = ell.checked_pow(n).expect("modulus fits in u64");
        Ok(FinRing { ell, n, modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The quotient ring ℤ/ℓ^{n−1}; requires `n ≥ 2`.
    pub fn reduced(&self) -> FinRing {
        assert!(self.n >= 2);
        FinRing::new(self.ell, self.n - 1).expect("reduction stays valid")
    }

    /// Inverse of `a` modulo ℓⁿ; `a` must be coprime to ℓ.
    pub fn inv(&self, a: u64) -> Option<u64> {
        mod_inv(a, self.modulus)
    }
}

/// Inverse modulo `m` by extended Euclid; `None` when not coprime.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Dense square matrix over ℤ/m, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModMatrix {
    pub dim: usize,
    pub modulus: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(dim: usize, modulus: u64) -> Self {
        ModMatrix {
            dim,
            modulus,
            entries: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize, modulus: u64) -> Self {
        let mut m = Self::zero(dim, modulus);
        for i in 0..dim {
            m.entries[i * dim + i] = 1 % modulus;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, modulus: u64) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        let entries = rows.into_iter().flatten().map(|e| e % modulus).collect();
        Some(ModMatrix {
            dim,
            modulus,
            entries,
        })
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.dim + j] = v % self.modulus;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.modulus), (other.dim, other.modulus));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect();
        ModMatrix {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.modulus), (other.dim, other.modulus));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + self.modulus - b) % self.modulus)
            .collect();
        ModMatrix {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = (c % self.modulus) as u128;
        let entries = self
            .entries
            .iter()
            .map(|a| ((*a as u128 * c) % self.modulus as u128) as u64)
            .collect();
        ModMatrix {
            dim: self.dim,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.modulus), (other.dim, other.modulus));
        let d = self.dim;
        let m = self.modulus as u128;
        let mut entries = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let cur = entries[i * d + j] as u128;
                    entries[i * d + j] = ((cur + a * other.entries[k * d + j] as u128) % m) as u64;
                }
            }
        }
        ModMatrix {
            dim: d,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        ModMatrix {
            dim: d,
            modulus: self.modulus,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let m = self.modulus as u128;
        let mut out = ModMatrix::zero(d, self.modulus);
        for i in 0..da {
            for j in 0..da {
                let a = self.get(i, j) as u128;
                if a == 0 {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        let v = (a * other.get(k, l) as u128) % m;
                        out.entries[(i * db + k) * d + (j * db + l)] = v as u64;
                    }
                }
            }
        }
        out
    }

    /// Entrywise reduction to a smaller modulus.
    pub fn reduce_mod(&self, modulus: u64) -> Self {
        ModMatrix {
            dim: self.dim,
            modulus,
            entries: self.entries.iter().map(|e| e % modulus).collect(),
        }
    }

    /// Rank of the matrix reduced modulo the prime `ell`.
    pub fn rank_mod_prime(&self, ell: u64) -> usize {
        let d = self.dim;
        let mut rows: Vec<Vec<u64>> = (0..d)
            .map(|i| (0..d).map(|j| self.entries[i * d + j] % ell).collect())
            .collect();
        let inv_mod = |a: u64| -> u64 {
            // Fermat inversion in 𝔽_ℓ
            let mut base = a % ell;
            let mut exp = ell - 2;
            let mut acc = 1u64;
            while exp > 0 {
                if exp & 1 == 1 {
                    acc = acc * base % ell;
                }
                base = base * base % ell;
                exp >>= 1;
            }
            acc
        };
        let mut rank = 0;
        for col in 0..d {
            let pivot = (rank..d).find(|&r| rows[r][col] % ell != 0);
            let Some(p) = pivot else { continue };
            rows.swap(rank, p);
            let inv = inv_mod(rows[rank][col]);
            for j in 0..d {
                rows[rank][j] = rows[rank][j] * inv % ell;
            }
            for r in 0..d {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for j in 0..d {
                        rows[r][j] = (rows[r][j] + (ell - f) * rows[rank][j]) % ell;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Invertible over ℤ/ℓⁿ iff the mod-ℓ reduction has full rank.
    pub fn is_invertible(&self, ell: u64) -> bool {
        self.rank_mod_prime(ell) == self.dim
    }

    /// Inverse over ℤ/m by elimination with unit pivots; `None` when the
    /// matrix is singular modulo some prime divisor of m.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let d = self.dim;
        let m = self.modulus;
        let mut a = self.clone();
        let mut out = ModMatrix::identity(d, m);
        for col in 0..d {
            let pivot = (col..d).find(|&r| mod_inv(a.get(r, col), m).is_some())?;
            if pivot != col {
                for j in 0..d {
                    let (x, y) = (a.get(col, j), a.get(pivot, j));
                    a.set(col, j, y);
                    a.set(pivot, j, x);
                    let (x, y) = (out.get(col, j), out.get(pivot, j));
                    out.set(col, j, y);
                    out.set(pivot, j, x);
                }
            }
            let inv = mod_inv(a.get(col, col), m)?;
            for j in 0..d {
                a.set(col, j, mul_mod(a.get(col, j), inv, m));
                out.set(col, j, mul_mod(out.get(col, j), inv, m));
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in 0..d {
                    let av = (a.get(r, j) + m - mul_mod(f, a.get(col, j), m)) % m;
                    a.set(r, j, av);
                    let ov = (out.get(r, j) + m - mul_mod(f, out.get(col, j), m)) % m;
                    out.set(r, j, ov);
                }
            }
        }
        Some(out)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("chain must end with the trivial subgroup")]
    ChainDoesNotEndTrivial,
    #[error("chain entry {0} is not a subgroup")]
    ChainNotSubgroup(usize),
    #[error("chain entry {0} is not normal in the group")]
    ChainNotNormal(usize),
    #[error("chain entry {0} is not contained in its predecessor")]
    ChainNotDescending(usize),
    #[error("|P| = {0} is not a prime power")]
    HeadNotPrimePower(usize),
    #[error("|P| shares the factor ℓ with the coefficient ring")]
    HeadNotCoprime,
    #[error("the head of the chain is not the full p-Sylow subgroup")]
    HeadNotSylow,
    #[error("action is missing a matrix for element {0}")]
    MissingAction(usize),
    #[error("action matrices must be square of a common dimension")]
    ActionShape,
    #[error("action matrix for element {0} is not invertible")]
    ActionNotInvertible(usize),
    #[error("action is not a homomorphism at the pair ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("subgroup order is not invertible modulo ℓ")]
    NonInvertibleOrder,
    #[error("representations are not over matching group, chain and ring")]
    Mismatch,
    #[error("base-change check needs n ≥ 2")]
    NeedsDeeperRing,
}

/// A module over ℤ/ℓⁿ with an action of a group `H` filtered by a
/// descending chain of normal subgroups `P = P₀ ⊇ P₁ ⊇ ⋯ ⊇ P_n = {1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FilteredRep {
    group: FiniteGroup,
    chain: Vec<Vec<usize>>,
    ring: FinRing,
    action: Vec<ModMatrix>,
}

impl FilteredRep {
    pub fn new(
        group: FiniteGroup,
        chain: Vec<Vec<usize>>,
        ring: FinRing,
        action: Vec<ModMatrix>,
    ) -> Result<Self, RepError> {
        let chain: Vec<Vec<usize>> = chain
            .into_iter()
            .map(|mut s| {
                if !s.contains(&0) {
                    s.push(0);
                }
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        match chain.last() {
            Some(last) if last == &vec![0usize] => {}
            _ => return Err(RepError::ChainDoesNotEndTrivial),
        }
        for (k, sub) in chain.iter().enumerate() {
            if !group.is_subgroup(sub) {
                return Err(RepError::ChainNotSubgroup(k));
            }
            if !group.is_normal(sub) {
                return Err(RepError::ChainNotNormal(k));
            }
            if k > 0 {
                let prev: BTreeSet<usize> = chain[k - 1].iter().copied().collect();
                if !sub.iter().all(|g| prev.contains(g)) {
                    return Err(RepError::ChainNotDescending(k));
                }
            }
        }
        let head = chain[0].len();
        let p = prime_power_base(head);
        if head > 1 {
            let p = p.ok_or(RepError::HeadNotPrimePower(head))?;
            if ring.ell == p as u64 {
                return Err(RepError::HeadNotCoprime);
            }
            if (group.order() / head) % p as usize == 0 {
                return Err(RepError::HeadNotSylow);
            }
        }
        if action.len() != group.order() {
            return Err(RepError::MissingAction(action.len()));
        }
        let dim = action[0].dim;
        if action
            .iter()
            .any(|m| m.dim != dim || m.modulus != ring.modulus())
        {
            return Err(RepError::ActionShape);
        }
        for (g, m) in action.iter().enumerate() {
            if !m.is_invertible(ring.ell) {
                return Err(RepError::ActionNotInvertible(g));
            }
        }
        let order = group.order();
        if order <= 64 {
            for a in 0..order {
                for b in 0..order {
                    if action[group.mul(a, b)] != action[a].mul(&action[b]) {
                        return Err(RepError::NotHomomorphism(a, b));
                    }
                }
            }
        } else {
            // deterministic spot check on a pseudorandom sample of pairs
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..512 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % order;
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let b = (state >> 33) as usize % order;
                if action[group.mul(a, b)] != action[a].mul(&action[b]) {
                    return Err(RepError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(FilteredRep {
            group,
            chain,
            ring,
            action,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn chain(&self) -> &[Vec<usize>] {
        &self.chain
    }

    pub fn ring(&self) -> &FinRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.action[0].dim
    }

    pub fn action(&self, g: usize) -> &ModMatrix {
        &self.action[g]
    }

    /// Number of break components: chain length counting `P₀` through
    /// `P_n` gives indices `−1, 0, …, n−1`.
    pub fn depth(&self) -> usize {
        self.chain.len() - 1
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.group == other.group && self.chain == other.chain && self.ring == other.ring
    }

    /// Tensor-product representation on the same group and chain.
    pub fn tensor(&self, other: &Self) -> Result<FilteredRep, RepError> {
        if !self.same_shape(other) {
            return Err(RepError::Mismatch);
        }
        let action = (0..self.group.order())
            .map(|g| self.action[g].kronecker(&other.action[g]))
            .collect();
        FilteredRep::new(self.group.clone(), self.chain.clone(), self.ring, action)
    }

    /// Internal-hom representation `X ↦ ρ'(g)·X·ρ(g)⁻¹`, vectorized
    /// column-major so the action matrix is `ρ(g⁻¹)ᵀ ⊗ ρ'(g)`.
    pub fn hom(&self, other: &Self) -> Result<FilteredRep, RepError> {
        if !self.same_shape(other) {
            return Err(RepError::Mismatch);
        }
        let action = (0..self.group.order())
            .map(|g| {
                self.action[self.group.inverse(g)]
                    .transpose()
                    .kronecker(&other.action[g])
            })
            .collect();
        FilteredRep::new(self.group.clone(), self.chain.clone(), self.ring, action)
    }

    /// Entrywise reduction of the action to ℤ/ℓ^{n−1}.
    pub fn reduce(&self) -> Result<FilteredRep, RepError> {
        if self.ring.n < 2 {
            return Err(RepError::NeedsDeeperRing);
        }
        let ring = self.ring.reduced();
        let action = self
            .action
            .iter()
            .map(|m| m.reduce_mod(ring.modulus()))
            .collect();
        FilteredRep::new(self.group.clone(), self.chain.clone(), ring, action)
    }
}

fn prime_power_base(n: usize) -> Option<u32> {
    if n <= 1 {
        return None;
    }
    let mut p = 2usize;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { Some(p as u32) } else { None };
        }
        p += 1;
    }
    Some(n as u32)
}

/// Averaging projector over an arbitrary subset that forms a subgroup of
/// invertible order.
pub fn averaging_projector(rep: &FilteredRep, subgroup: &[usize]) -> Result<ModMatrix, RepError> {
    let m = rep.ring.modulus();
    let inv = rep
        .ring
        .inv(subgroup.len() as u64)
        .ok_or(RepError::NonInvertibleOrder)?;
    let mut acc = ModMatrix::zero(rep.dim(), m);
    for &g in subgroup {
        acc = acc.add(&rep.action[g]);
    }
    Ok(acc.scale(inv))
}

/// Central idempotent `E_i = |P_i|⁻¹ Σ_{g∈P_i} ρ(g)` for a chain index
/// `0 ≤ i ≤ n`.
pub fn idempotent(rep: &FilteredRep, i: usize) -> ModMatrix {
    averaging_projector(rep, &rep.chain[i]).expect("chain orders are invertible by construction")
}

/// One break component: the projector cutting it out and its free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakComponent {
    /// Break index in `{−1, 0, …, n−1}`.
    pub index: i64,
    pub projector: ModMatrix,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakDecomp {
    pub components: Vec<BreakComponent>,
}

impl BreakDecomp {
    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.components.iter().map(|c| (c.index, c.rank)).collect()
    }
}

/// Break decomposition by the orthogonal system
/// `π₋₁ = E₀`, `π_i = E_{i+1}(1 − E_i)`. Ranks are computed modulo ℓ:
/// projector images over the local ring are free, so the mod-ℓ rank is the
/// free rank.
pub fn break_decompose(rep: &FilteredRep) -> BreakDecomp {
    let n = rep.depth();
    let ell = rep.ring.ell;
    let idem: Vec<ModMatrix> = (0..=n).map(|i| idempotent(rep, i)).collect();
    let ident = ModMatrix::identity(rep.dim(), rep.ring.modulus());
    let mut components = Vec::with_capacity(n + 1);
    components.push(BreakComponent {
        index: -1,
        rank: idem[0].rank_mod_prime(ell),
        projector: idem[0].clone(),
    });
    for i in 0..n {
        let proj = idem[i + 1].mul(&ident.sub(&idem[i]));
        components.push(BreakComponent {
            index: i as i64,
            rank: proj.rank_mod_prime(ell),
            projector: proj,
        });
    }
    BreakDecomp { components }
}

/// Rank of the fixed module of a subgroup, computed as the rank of the
/// averaging projector (its image is the fixed submodule since the order
/// is invertible).
pub fn fixed_rank(rep: &FilteredRep, subgroup: &[usize]) -> Result<usize, RepError> {
    let proj = averaging_projector(rep, subgroup)?;
    Ok(proj.rank_mod_prime(rep.ring.ell))
}

/// One named check with its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub conditions: Vec<Condition>,
    pub pass: bool,
}

impl Report {
    fn from_conditions(conditions: Vec<Condition>) -> Self {
        let pass = conditions.iter().all(|c| c.pass);
        Report { conditions, pass }
    }
}

/// Verifies the defining identities of a (possibly externally supplied)
/// decomposition against the representation: completeness, orthogonality,
/// invariants fixed by the head, each component killed by its own level
/// and fixed by all deeper levels.
pub fn verify_decomp(rep: &FilteredRep, decomp: &BreakDecomp) -> Report {
    let mut conditions = Vec::new();
    let dim = rep.dim();
    let m = rep.ring.modulus();
    let mut sum = ModMatrix::zero(dim, m);
    for c in &decomp.components {
        sum = sum.add(&c.projector);
    }
    conditions.push(Condition {
        name: "projectors sum to the identity".into(),
        pass: sum == ModMatrix::identity(dim, m),
    });
    let mut orthogonal = true;
    for (a, ca) in decomp.components.iter().enumerate() {
        for (b, cb) in decomp.components.iter().enumerate() {
            let prod = ca.projector.mul(&cb.projector);
            let ok = if a == b {
                prod == ca.projector
            } else {
                prod.is_zero()
            };
            orthogonal &= ok;
        }
    }
    conditions.push(Condition {
        name: "projectors are idempotent and pairwise orthogonal".into(),
        pass: orthogonal,
    });
    let idem: Vec<ModMatrix> = (0..=rep.depth()).map(|i| idempotent(rep, i)).collect();
    for c in &decomp.components {
        if c.index < 0 {
            conditions.push(Condition {
                name: "component -1 is fixed by the full head group".into(),
                pass: idem[0].mul(&c.projector) == c.projector,
            });
        } else {
            let i = c.index as usize;
            conditions.push(Condition {
                name: format!("component {i} is killed by averaging over its level"),
                pass: idem[i].mul(&c.projector).is_zero(),
            });
            let mut fixed = true;
            for j in (i + 1)..=rep.depth() {
                fixed &= idem[j].mul(&c.projector) == c.projector;
            }
            conditions.push(Condition {
                name: format!("component {i} is fixed by all deeper levels"),
                pass: fixed,
            });
        }
    }
    let total: usize = decomp.components.iter().map(|c| c.rank).sum();
    conditions.push(Condition {
        name: "component ranks sum to the module rank".into(),
        pass: total == dim,
    });
    Report::from_conditions(conditions)
}

/// Decomposes and verifies in one step.
pub fn verify_break_props(rep: &FilteredRep) -> Report {
    verify_decomp(rep, &break_decompose(rep))
}

/// Containment rules for breaks of tensor and hom representations, checked
/// by projector algebra.
pub fn tensor_breaks_check(rep_a: &FilteredRep, rep_b: &FilteredRep) -> Result<Report, RepError> {
    let mut conditions = Vec::new();
    let da = break_decompose(rep_a);
    let db = break_decompose(rep_b);

    let tensor = rep_a.tensor(rep_b)?;
    let dt = break_decompose(&tensor);
    conditions.push(check_pairwise_rule("tensor", &da, &db, &dt, |pa, pb| {
        pa.kronecker(pb)
    }));

    let hom = rep_a.hom(rep_b)?;
    let dh = break_decompose(&hom);
    conditions.push(check_pairwise_rule("hom", &da, &db, &dh, |pa, pb| {
        pa.transpose().kronecker(pb)
    }));

    Ok(Report::from_conditions(conditions))
}

fn check_pairwise_rule(
    label: &str,
    da: &BreakDecomp,
    db: &BreakDecomp,
    dprod: &BreakDecomp,
    embed: impl Fn(&ModMatrix, &ModMatrix) -> ModMatrix,
) -> Condition {
    let mut pass = true;
    for ca in &da.components {
        for cb in &db.components {
            let sub = embed(&ca.projector, &cb.projector);
            for ck in &dprod.components {
                let violates = if ca.index != cb.index {
                    ck.index != ca.index.max(cb.index)
                } else {
                    ck.index > ca.index
                };
                if violates && !ck.projector.mul(&sub).is_zero() {
                    pass = false;
                }
            }
        }
    }
    Condition {
        name: format!("{label} breaks obey the pairwise max/containment rule"),
        pass,
    }
}

/// The decomposition commutes with reduction ℤ/ℓⁿ → ℤ/ℓ^{n−1}: projectors
/// of the reduced representation agree entrywise with reduced projectors.
pub fn base_change_check(rep: &FilteredRep) -> Result<Report, RepError> {
    let reduced = rep.reduce()?;
    let d1 = break_decompose(rep);
    let d2 = break_decompose(&reduced);
    let m = reduced.ring.modulus();
    let mut conditions = Vec::new();
    for (c1, c2) in d1.components.iter().zip(&d2.components) {
        conditions.push(Condition {
            name: format!("component {} projector reduces correctly", c1.index),
            pass: c1.projector.reduce_mod(m) == c2.projector && c1.rank == c2.rank,
        });
    }
    Ok(Report::from_conditions(conditions))
}

// --- serde for the JSON input shape ---

#[derive(Serialize, Deserialize)]
struct RawRep {
    ell: u64,
    n: u32,
    group: RawGroupRef,
    chain: Vec<Vec<usize>>,
    action: std::collections::BTreeMap<String, Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct RawGroupRef {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl Serialize for FilteredRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawRep {
            ell: self.ring.ell,
            n: self.ring.n,
            group: RawGroupRef {
                order: self.group.order(),
                table: (0..self.group.order())
                    .map(|a| {
                        (0..self.group.order())
                            .map(|b| self.group.mul(a, b))
                            .collect()
                    })
                    .collect(),
            },
            chain: self.chain.clone(),
            action: (0..self.group.order())
                .map(|g| (g.to_string(), self.action[g].rows()))
                .collect(),
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FilteredRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawRep::deserialize(d)?;
        if raw.group.table.len() != raw.group.order {
            return Err(D::Error::custom("declared order does not match table"));
        }
        let group = FiniteGroup::new(raw.group.table).map_err(D::Error::custom)?;
        let ring = FinRing::new(raw.ell, raw.n).map_err(D::Error::custom)?;
        let mut action = vec![None; group.order()];
        for (k, rows) in raw.action {
            let idx: usize = k
                .parse()
                .map_err(|_| D::Error::custom("action keys must be element indices"))?;
            if idx >= group.order() {
                return Err(D::Error::custom("action key out of range"));
            }
            let m = ModMatrix::from_rows(rows, ring.modulus())
                .ok_or_else(|| D::Error::custom("action matrices must be square"))?;
            action[idx] = Some(m);
        }
        let action: Vec<ModMatrix> = action
            .into_iter()
            .enumerate()
            .map(|(g, m)| m.ok_or_else(|| D::Error::custom(format!("missing action for {g}"))))
            .collect::<Result<_, _>>()?;
        FilteredRep::new(group, raw.chain, ring, action).map_err(D::Error::custom)
    }
}

//! Higher-ramification data for a finite stabilizer group: the lower
//! filtration attached to an i-function, the order-preserving conversion to
//! upper numbering, Artin and Swan class functions, induction and inner
//! products, and discriminant values.
//!
//! A point carries the filtration seen from one side of its radius only.
//! Relating the two one-sided filtrations through the central one attached
//! to the rank-one generization would require i-functions on both sides of
//! the same covering, which this model does not carry; that comparison is
//! deliberately not computed.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::valgroup::{gv_add, gv_min, gv_sub, GammaVal, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("multiplication table is not square of the declared order")]
    BadShape,
    #[error("table entry out of range")]
    EntryOutOfRange,
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative")]
    NotAssociative,
}

/// Finite group presented by its Cayley table; element 0 is the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    inv: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<RawGroup> for FiniteGroup {
    type Error = GroupError;
    fn try_from(raw: RawGroup) -> Result<Self, GroupError> {
        FiniteGroup::new(raw.table)
    }
}

impl From<FiniteGroup> for RawGroup {
    fn from(g: FiniteGroup) -> RawGroup {
        RawGroup {
            order: g.order,
            table: g.table,
        }
    }
}

impl FiniteGroup {
    /// Validates the table as a group law (identity 0, inverses,
    /// associativity) and precomputes inverses and conjugacy classes.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order) {
            return Err(GroupError::BadShape);
        }
        if table.iter().any(|row| row.iter().any(|&e| e >= order)) {
            return Err(GroupError::EntryOutOfRange);
        }
        for i in 0..order {
            if table[0][i] != i || table[i][0] != i {
                return Err(GroupError::NoIdentity);
            }
        }
        let mut inv = vec![usize::MAX; order];
        for i in 0..order {
            match (0..order).find(|&j| table[i][j] == 0 && table[j][i] == 0) {
                Some(j) => inv[i] = j,
                None => return Err(GroupError::NoInverse(i)),
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative);
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; order];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut orbit: BTreeSet<usize> = BTreeSet::new();
            for t in 0..order {
                orbit.insert(table[table[t][g]][inv[t]]);
            }
            let id = classes.len();
            for &h in &orbit {
                class_of[h] = id;
            }
            classes.push(orbit.into_iter().collect());
        }
        Ok(FiniteGroup {
            order,
            table,
            labels: None,
            inv,
            classes,
            class_of,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        let mut g = FiniteGroup::new(table).expect("cyclic table is a group");
        g.labels = Some((0..n).map(|k| format!("g^{k}")).collect());
        g
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn conjugate(&self, t: usize, g: usize) -> usize {
        self.table[self.table[t][g]][self.inv[t]]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        seen.insert(0);
        let mut queue: Vec<usize> = gens.to_vec();
        while let Some(g) = queue.pop() {
            if seen.insert(g) {
                for &h in gens {
                    queue.push(self.mul(g, h));
                }
                for &h in seen.clone().iter() {
                    queue.push(self.mul(g, h));
                    queue.push(self.mul(h, g));
                }
                queue.push(self.inv[g]);
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        if !s.contains(&0) {
            return false;
        }
        s.iter()
            .all(|&a| s.contains(&self.inv[a]) && s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        (0..self.order).all(|t| s.iter().all(|&h| s.contains(&self.conjugate(t, h))))
    }
}

/// Rational-valued class function on a finite group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassFun {
    group: FiniteGroup,
    class_values: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassFunError {
    #[error("values are not constant on conjugacy classes")]
    NotClassConstant,
    #[error("class functions live on different groups")]
    GroupMismatch,
}

impl ClassFun {
    pub fn from_element_values(group: &FiniteGroup, values: &[Rat]) -> Result<Self, ClassFunError> {
        assert_eq!(values.len(), group.order());
        let mut class_values = vec![Rat::zero(); group.conjugacy_classes().len()];
        for (id, class) in group.conjugacy_classes().iter().enumerate() {
            let v = values[class[0]].clone();
            if class.iter().any(|&g| values[g] != v) {
                return Err(ClassFunError::NotClassConstant);
            }
            class_values[id] = v;
        }
        Ok(ClassFun {
            group: group.clone(),
            class_values,
        })
    }

    pub fn zero(group: &FiniteGroup) -> Self {
        ClassFun {
            group: group.clone(),
            class_values: vec![Rat::zero(); group.conjugacy_classes().len()],
        }
    }

    /// Character of the regular representation.
    pub fn regular(group: &FiniteGroup) -> Self {
        let mut values = vec![Rat::zero(); group.order()];
        values[0] = Rat::from_int(group.order() as i64);
        Self::from_element_values(group, &values).expect("regular is class-constant")
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        let values = vec![Rat::one(); group.order()];
        Self::from_element_values(group, &values).expect("constant is class-constant")
    }

    /// Augmentation character `reg − 1`.
    pub fn augmentation(group: &FiniteGroup) -> Self {
        let mut values = vec![-Rat::one(); group.order()];
        values[0] = Rat::from_int(group.order() as i64 - 1);
        Self::from_element_values(group, &values).expect("augmentation is class-constant")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn value_at(&self, g: usize) -> &Rat {
        &self.class_values[self.group.class_of(g)]
    }

    pub fn add(&self, other: &Self) -> Result<Self, ClassFunError> {
        if self.group != other.group {
            return Err(ClassFunError::GroupMismatch);
        }
        Ok(ClassFun {
            group: self.group.clone(),
            class_values: self
                .class_values
                .iter()
                .zip(&other.class_values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ClassFunError> {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ClassFun {
            group: self.group.clone(),
            class_values: self.class_values.iter().map(|v| v * c).collect(),
        }
    }

    /// Per-class summary `(minimal element, class size, value)`, in class
    /// order (classes are sorted by their minimal element).
    pub fn class_summaries(&self) -> Vec<(usize, usize, Rat)> {
        self.group
            .conjugacy_classes()
            .iter()
            .enumerate()
            .map(|(id, class)| (class[0], class.len(), self.class_values[id].clone()))
            .collect()
    }
}

/// Natural scalar product `(1/|G|)·Σ_g f(g)·h(g⁻¹)`.
pub fn inner(cf1: &ClassFun, cf2: &ClassFun) -> Result<Rat, ClassFunError> {
    if cf1.group != cf2.group {
        return Err(ClassFunError::GroupMismatch);
    }
    let g = &cf1.group;
    let mut acc = Rat::zero();
    for x in 0..g.order() {
        acc = acc + cf1.value_at(x) * cf2.value_at(g.inverse(x));
    }
    Ok(acc / Rat::from_int(g.order() as i64))
}

/// Induction of a class function along an injective homomorphism
/// `embedding: H → G` given by the image index of every element of `H`.
pub fn induce(
    cf: &ClassFun,
    big: &FiniteGroup,
    embedding: &[usize],
) -> Result<ClassFun, EmbeddingError> {
    let small = &cf.group;
    if embedding.len() != small.order() {
        return Err(EmbeddingError::WrongLength);
    }
    let mut seen = BTreeSet::new();
    for (h, &img) in embedding.iter().enumerate() {
        if img >= big.order() {
            return Err(EmbeddingError::OutOfRange);
        }
        if !seen.insert(img) {
            return Err(EmbeddingError::NotInjective);
        }
        for (h2, &img2) in embedding.iter().enumerate() {
            if embedding[small.mul(h, h2)] != big.mul(img, img2) {
                return Err(EmbeddingError::NotHomomorphism);
            }
        }
    }
    let image: BTreeMap<usize, usize> =
        embedding.iter().enumerate().map(|(h, &g)| (g, h)).collect();
    let mut values = vec![Rat::zero(); big.order()];
    for g in 0..big.order() {
        let mut acc = Rat::zero();
        for t in 0..big.order() {
            let c = big.conjugate(big.inverse(t), g);
            if let Some(&h) = image.get(&c) {
                acc = acc + cf.value_at_small(h);
            }
        }
        values[g] = acc / Rat::from_int(small.order() as i64);
    }
    ClassFun::from_element_values(big, &values).map_err(|_| EmbeddingError::NotHomomorphism)
}

impl ClassFun {
    fn value_at_small(&self, h: usize) -> &Rat {
        self.value_at(h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("embedding must list an image for every element of the subgroup")]
    WrongLength,
    #[error("embedding image out of range")]
    OutOfRange,
    #[error("embedding is not injective")]
    NotInjective,
    #[error("embedding is not a homomorphism")]
    NotHomomorphism,
}

/// The canonical embedding of the order-`d` subgroup of a cyclic group of
/// order `n` (requires `d | n`).
pub fn cyclic_divisor_embedding(n: usize, d: usize) -> Vec<usize> {
    assert!(d >= 1 && n % d == 0);
    (0..d).map(|k| k * (n / d)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RamError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("gamma0 must have flat part 0 and positive eps part")]
    BadGamma0,
    #[error("i-value missing for element {0}")]
    MissingValue(usize),
    #[error("i-value for element {0} lies below gamma0")]
    ValueBelowGamma0(usize),
    #[error("i-values are not constant on conjugacy classes")]
    NotClassConstant,
    #[error("the level set at one of the i-values is not a subgroup")]
    LevelSetNotSubgroup,
    #[error("a ramification level set is not normal in the group")]
    LevelSetNotNormal,
    #[error("elements with wild i-values do not generate a p-group for p = {0}")]
    WildPartNotPGroup(u32),
}

/// A finite stabilizer together with its i-function and the infinitesimal
/// generator of its value group, all in additive coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RamPoint {
    group: FiniteGroup,
    /// Additive value of `i(σ)` for each non-identity element.
    i_map: Vec<Option<GammaVal>>,
    gamma0: GammaVal,
    p: u32,
    rho: Option<Rat>,
}

impl RamPoint {
    pub fn new(
        group: FiniteGroup,
        i_values: BTreeMap<usize, GammaVal>,
        gamma0: GammaVal,
        p: u32,
        rho: Option<Rat>,
    ) -> Result<Self, RamError> {
        if !gamma0.flat.is_zero() || !gamma0.eps.is_positive() {
            return Err(RamError::BadGamma0);
        }
        let mut i_map: Vec<Option<GammaVal>> = vec![None; group.order()];
        for g in 1..group.order() {
            let v = i_values.get(&g).ok_or(RamError::MissingValue(g))?;
            if *v < gamma0 {
                return Err(RamError::ValueBelowGamma0(g));
            }
            i_map[g] = Some(v.clone());
        }
        let rp = RamPoint {
            group,
            i_map,
            gamma0,
            p,
            rho,
        };
        rp.validate()?;
        Ok(rp)
    }

    fn validate(&self) -> Result<(), RamError> {
        for class in self.group.conjugacy_classes() {
            if class[0] == 0 {
                continue;
            }
            let v = &self.i_map[class[0]];
            if class.iter().any(|&g| self.i_map[g] != *v) {
                return Err(RamError::NotClassConstant);
            }
        }
        for w in self.distinct_values() {
            let set = self.filtration_group(&w);
            if !self.group.is_subgroup(&set) {
                return Err(RamError::LevelSetNotSubgroup);
            }
            if !self.group.is_normal(&set) {
                return Err(RamError::LevelSetNotNormal);
            }
        }
        let wild: Vec<usize> = (1..self.group.order())
            .filter(|&g| self.i_map[g].as_ref().unwrap().flat.is_positive())
            .collect();
        if !wild.is_empty() {
            let sub = self.group.subgroup_generated(&wild);
            let mut n = sub.len();
            while n % self.p as usize == 0 {
                n /= self.p as usize;
            }
            if n != 1 {
                return Err(RamError::WildPartNotPGroup(self.p));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn gamma0(&self) -> &GammaVal {
        &self.gamma0
    }

    pub fn residue_char(&self) -> u32 {
        self.p
    }

    pub fn rho(&self) -> Option<&Rat> {
        self.rho.as_ref()
    }

    pub fn i_value(&self, g: usize) -> Option<&GammaVal> {
        self.i_map[g].as_ref()
    }

    fn distinct_values(&self) -> Vec<GammaVal> {
        let mut vals: Vec<GammaVal> = self.i_map.iter().flatten().cloned().collect();
        vals.sort();
        vals.dedup();
        vals
    }

    /// Elements whose i-value is at least `w` additively (ramification at
    /// least as deep as `w`), together with the identity.
    pub fn filtration_group(&self, w: &GammaVal) -> Vec<usize> {
        let mut set = vec![0usize];
        for g in 1..self.group.order() {
            if self.i_map[g].as_ref().unwrap() >= w {
                set.push(g);
            }
        }
        set
    }
}

/// Distinct i-values of the point in increasing additive order; these are
/// the jumps of the lower-numbering filtration below 1.
pub fn jumps_lower(rp: &RamPoint) -> Vec<GammaVal> {
    rp.distinct_values()
}

/// Order-preserving bijection to upper numbering: in additive form
/// `w ↦ w + Σ_{g≠1} min(w, i(g) − γ₀)`; the identity contributes the bare
/// `w` once.
pub fn phi_upper(rp: &RamPoint, w: &GammaVal) -> GammaVal {
    assert!(
        *w >= GammaVal::zero(),
        "phi is defined for non-negative additive values"
    );
    let mut acc = w.clone();
    for g in 1..rp.group.order() {
        let shifted = gv_sub(rp.i_map[g].as_ref().unwrap(), &rp.gamma0);
        acc = gv_add(&acc, &gv_min(w.clone(), shifted));
    }
    acc
}

fn jump_data(rp: &RamPoint) -> Vec<(GammaVal, usize)> {
    jumps_lower(rp)
        .into_iter()
        .map(|w| {
            let o = rp.filtration_group(&w).len();
            (w, o)
        })
        .collect()
}

fn conductor_from_increments(rp: &RamPoint, take: impl Fn(&GammaVal) -> Rat) -> ClassFun {
    let g = &rp.group;
    let mut acc = ClassFun::zero(g);
    let mut prev = take(&rp.gamma0);
    for (w, order) in jump_data(rp) {
        let level = take(&w);
        let increment = &level - &prev;
        prev = level;
        if increment.is_zero() {
            continue;
        }
        let subgroup = rp.filtration_group(&w);
        let ind = induce_augmentation_from_subset(g, &subgroup);
        let coeff = Rat::from_int(order as i64) * increment;
        acc = acc.add(&ind.scale(&coeff)).expect("same group");
    }
    acc
}

/// Induction to `g` of the augmentation character of a subgroup given as a
/// set of element indices.
fn induce_augmentation_from_subset(g: &FiniteGroup, subgroup: &[usize]) -> ClassFun {
    let s: BTreeSet<usize> = subgroup.iter().copied().collect();
    let o = subgroup.len() as i64;
    let mut values = vec![Rat::zero(); g.order()];
    for x in 0..g.order() {
        let mut acc = Rat::zero();
        for t in 0..g.order() {
            let c = g.conjugate(g.inverse(t), x);
            if s.contains(&c) {
                acc = acc
                    + if c == 0 {
                        Rat::from_int(o - 1)
                    } else {
                        -Rat::one()
                    };
            }
        }
        values[x] = acc / Rat::from_int(o);
    }
    ClassFun::from_element_values(g, &values).expect("induced function is class-constant")
}

/// Flat Artin character: the real-part conductor contributions, summed
/// over the filtration jumps with the subgroup orders as weights.
pub fn artin_flat(rp: &RamPoint) -> ClassFun {
    conductor_from_increments(rp, |w| w.flat.clone())
}

/// Swan character: the infinitesimal-part increments over the jumps,
/// anchored at the eps exponent of `γ₀`.
pub fn swan_nat(rp: &RamPoint) -> ClassFun {
    conductor_from_increments(rp, |w| w.eps.clone())
}

/// Total Artin conductor's infinitesimal part taken directly from the
/// definition: `a♮(σ≠1) = −o(St)·eps(i(σ))`, `a♮(1) = o(St)·Σ eps(i(τ))`.
pub fn artin_nat(rp: &RamPoint) -> ClassFun {
    let g = &rp.group;
    let o = Rat::from_int(g.order() as i64);
    let mut values = vec![Rat::zero(); g.order()];
    let mut total = Rat::zero();
    for x in 1..g.order() {
        let e = rp.i_map[x].as_ref().unwrap().eps.clone();
        total = total + &e;
        values[x] = -(&o * &e);
    }
    values[0] = o * total;
    ClassFun::from_element_values(g, &values).expect("class-constant by i-map constancy")
}

/// Additive valuation of the different: the sum of the i-values over the
/// non-identity elements.
pub fn different_val(rp: &RamPoint) -> GammaVal {
    let mut acc = GammaVal::zero();
    for g in 1..rp.group.order() {
        acc = gv_add(&acc, rp.i_map[g].as_ref().unwrap());
    }
    acc
}

/// Discriminant value of the covering at this point: the flat Artin
/// character paired with the regular character, i.e. its value at 1.
pub fn delta_value(rp: &RamPoint) -> Rat {
    artin_flat(rp).value_at(0).clone()
}

/// Additive valuation of `1 − ζ` for `ζ` a root of unity of the given
/// order: `1/(p^{j−1}(p−1))` when the order is exactly `p^j` with `j ≥ 1`,
/// and `0` otherwise (mixed orders give units).
pub fn one_minus_root_val(order: usize, p: u32) -> Rat {
    if order <= 1 {
        return Rat::zero();
    }
    let p = p as usize;
    let mut m = order;
    let mut pj = 1usize;
    while m % p == 0 {
        m /= p;
        pj *= p;
    }
    if m != 1 || pj == 1 {
        // order is not a pure power of p
        return Rat::zero();
    }
    Rat::new(1, (pj / p * (p - 1)) as i64)
}

/// Ramification point of the degree-`n` Kummer covering at a circle of
/// valuation `rho`: cyclic group, `i(σ_ζ) = val(1−ζ)·γ₀` with
/// `γ₀ = (0, 1/n)`. The i-map does not depend on the radius.
pub fn ram_from_kummer(n: usize, p: u32, rho: Rat) -> RamPoint {
    assert!(n >= 1);
    let group = FiniteGroup::cyclic(n);
    let gamma0 = GammaVal::new(Rat::zero(), Rat::new(1, n as i64));
    let mut i_values = BTreeMap::new();
    for k in 1..n {
        let order = group.element_order(k);
        let flat = one_minus_root_val(order, p);
        i_values.insert(k, GammaVal::new(flat, gamma0.eps.clone()));
    }
    RamPoint::new(group, i_values, gamma0, p, Some(rho)).expect("Kummer data is always valid")
}

// --- serde: the JSON shape inlines the group next to the i-map ---

#[derive(Serialize, Deserialize)]
struct RawRamPoint {
    order: usize,
    table: Vec<Vec<usize>>,
    i_map: BTreeMap<String, GammaVal>,
    gamma0: GammaVal,
    p: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rho: Option<Rat>,
}

impl Serialize for RamPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawRamPoint {
            order: self.group.order(),
            table: self.group.table.clone(),
            i_map: (1..self.group.order())
                .map(|g| (g.to_string(), self.i_map[g].clone().unwrap()))
                .collect(),
            gamma0: self.gamma0.clone(),
            p: self.p,
            rho: self.rho.clone(),
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RamPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawRamPoint::deserialize(d)?;
        if raw.table.len() != raw.order {
            return Err(D::Error::custom("declared order does not match table"));
        }
        let group = FiniteGroup::new(raw.table).map_err(D::Error::custom)?;
        let mut i_values = BTreeMap::new();
        for (k, v) in raw.i_map {
            let idx: usize = k
                .parse()
                .map_err(|_| D::Error::custom("i_map keys must be element indices"))?;
            i_values.insert(idx, v);
        }
        RamPoint::new(group, i_values, raw.gamma0, raw.p, raw.rho).map_err(D::Error::custom)
    }
}

//! Exact frequency spectra Ω = Δ Σ σ(H_{r,l}).
//!
//! All arithmetic runs over integers: half-integer eigenvalues are carried as
//! numerators over a shared denominator, and a set is only reported in
//! reduced form once every element is divisible by that denominator.

use std::collections::{BTreeMap, BTreeSet};

use crate::encodings::{schedule, EncodingFamily, Family};
use crate::error::{Error, Result};

/// Upper bound on pair products evaluated for the degeneracy multiset.
pub const DEGENERACY_PAIR_CAP: u128 = 100_000_000;

/// Sorted set of rationals `elements[i] / scale`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreqSet {
    elements: Vec<i64>,
    scale: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FreqSet {
    pub fn new(values: impl IntoIterator<Item = i64>, scale: i64) -> Result<Self> {
        if scale <= 0 {
            return Err(Error::contract("frequency scale must be positive"));
        }
        let elements: BTreeSet<i64> = values.into_iter().collect();
        Ok(Self::from_sorted(elements.into_iter().collect(), scale))
    }

    pub fn integers(values: impl IntoIterator<Item = i64>) -> Self {
        Self::new(values, 1).expect("unit scale")
    }

    fn from_sorted(elements: Vec<i64>, scale: i64) -> Self {
        let common = elements.iter().fold(scale, |g, &e| gcd(g, e));
        let common = common.max(1);
        Self {
            elements: elements.into_iter().map(|e| e / common).collect(),
            scale: scale / common,
        }
    }

    /// Numerators, ascending.
    pub fn numerators(&self) -> &[i64] {
        &self.elements
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let s = self.scale as f64;
        self.elements.iter().map(|&e| e as f64 / s).collect()
    }

    /// Integer-valued elements, if every element is an integer.
    pub fn as_integers(&self) -> Option<&[i64]> {
        (self.scale == 1).then_some(self.elements.as_slice())
    }

    pub fn contains_integer(&self, k: i64) -> bool {
        self.scale == 1 && self.elements.binary_search(&k).is_ok()
    }

    /// Count of strictly positive elements.
    pub fn positive_size(&self) -> usize {
        self.elements.iter().filter(|&&e| e > 0).count()
    }

    /// Largest K with every integer in [-K, K] present.
    pub fn max_gapfree_k(&self) -> u64 {
        if self.scale != 1 || self.elements.binary_search(&0).is_err() {
            return 0;
        }
        let mut k = 0i64;
        while self.elements.binary_search(&(k + 1)).is_ok()
            && self.elements.binary_search(&-(k + 1)).is_ok()
        {
            k += 1;
        }
        k as u64
    }

    fn rescaled(&self, scale: i64) -> Vec<i64> {
        let f = scale / self.scale;
        self.elements.iter().map(|&e| e * f).collect()
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// ΔS = {s₁ − s₂ | s₁, s₂ ∈ S}.
pub fn difference_set(set: &FreqSet) -> Result<FreqSet> {
    if set.is_empty() {
        return Err(Error::contract("difference set of an empty set"));
    }
    let mut out = BTreeSet::new();
    for &a in &set.elements {
        for &b in &set.elements {
            out.insert(a - b);
        }
    }
    Ok(FreqSet::from_sorted(out.into_iter().collect(), set.scale))
}

/// Σ S_l: all sums choosing one element from each set, deduplicated after
/// every fold.
pub fn minkowski_sum(sets: &[FreqSet]) -> Result<FreqSet> {
    let Some(first) = sets.first() else {
        return Err(Error::contract("Minkowski sum of an empty list"));
    };
    if sets.iter().any(FreqSet::is_empty) {
        return Err(Error::contract("Minkowski sum with an empty operand"));
    }
    let scale = sets.iter().fold(1, |s, set| lcm(s, set.scale));
    let mut acc: BTreeSet<i64> = first.rescaled(scale).into_iter().collect();
    for set in &sets[1..] {
        let rhs = set.rescaled(scale);
        let mut next = BTreeSet::new();
        for &a in &acc {
            for &b in &rhs {
                next.insert(a + b);
            }
        }
        acc = next;
    }
    Ok(FreqSet::from_sorted(acc.into_iter().collect(), scale))
}

/// Multiset variant of [`minkowski_sum`] over integer numerators sharing one
/// scale: maps each sum to the number of tuples producing it.
pub fn minkowski_multiset(sets: &[Vec<i64>]) -> Result<BTreeMap<i64, u128>> {
    let Some(first) = sets.first() else {
        return Err(Error::contract("Minkowski sum of an empty list"));
    };
    let mut acc: BTreeMap<i64, u128> = BTreeMap::new();
    for &a in first {
        *acc.entry(a).or_default() += 1;
    }
    for set in &sets[1..] {
        let work = acc.len() as u128 * set.len() as u128;
        if work > DEGENERACY_PAIR_CAP {
            return Err(Error::Capacity(format!(
                "multiset fold needs {work} pair products (cap {DEGENERACY_PAIR_CAP})"
            )));
        }
        let mut next = BTreeMap::new();
        for (&a, &c) in &acc {
            for &b in set {
                *next.entry(a + b).or_default() += c;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Frequency spectrum of a univariate model together with its degeneracies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub omega: FreqSet,
    pub positive_size: usize,
    pub max_gapfree_k: u64,
    /// Numerator of ω (over `omega.scale()`) → number of ordered generator-sum
    /// pairs whose difference is ω.
    pub degeneracy: BTreeMap<i64, u128>,
}

impl SpectrumReport {
    pub fn total_degeneracy(&self) -> u128 {
        self.degeneracy.values().sum()
    }
}

/// Per-sub-generator eigenvalue sets β_{r,l}·σ(H) as numerators over the
/// eigenvalue denominator.
fn subgenerator_sets(enc: &EncodingFamily, qubits: usize, layers: usize) -> Result<(Vec<Vec<i64>>, i64)> {
    let sched = schedule(enc, qubits, layers)?;
    let eigen = enc.subgenerator_eigenvalues();
    let sets = sched
        .values()
        .iter()
        .map(|&beta| {
            eigen
                .values
                .iter()
                .map(|&lam| {
                    beta.checked_mul(lam)
                        .ok_or_else(|| Error::architecture("eigenvalue overflow"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((sets, eigen.denominator))
}

/// Ω alone, without the degeneracy multiset.
pub fn omega(family: Family, qubits: usize, layers: usize) -> Result<FreqSet> {
    let enc = EncodingFamily::for_qubits(family, qubits)?;
    omega_for(&enc, qubits, layers)
}

pub fn omega_for(enc: &EncodingFamily, qubits: usize, layers: usize) -> Result<FreqSet> {
    let (sets, denom) = subgenerator_sets(enc, qubits, layers)?;
    let sets = sets
        .into_iter()
        .map(|s| FreqSet::new(s, denom))
        .collect::<Result<Vec<_>>>()?;
    difference_set(&minkowski_sum(&sets)?)
}

pub fn frequency_spectrum(family: Family, qubits: usize, layers: usize) -> Result<SpectrumReport> {
    let enc = EncodingFamily::for_qubits(family, qubits)?;
    let omega = omega_for(&enc, qubits, layers)?;

    let (sets, denom) = subgenerator_sets(&enc, qubits, layers)?;
    let sums = minkowski_multiset(&sets)?;
    let pairs = sums.len() as u128 * sums.len() as u128;
    if pairs > DEGENERACY_PAIR_CAP {
        return Err(Error::Capacity(format!(
            "degeneracy needs {pairs} pairs (cap {DEGENERACY_PAIR_CAP})"
        )));
    }
    // differences carry denominator `denom`; omega may be reduced further
    let reduce = denom / omega.scale();
    let mut degeneracy = BTreeMap::new();
    for (&a, &ca) in &sums {
        for (&b, &cb) in &sums {
            *degeneracy.entry((a - b) / reduce).or_default() += ca * cb;
        }
    }
    Ok(SpectrumReport {
        positive_size: omega.positive_size(),
        max_gapfree_k: omega.max_gapfree_k(),
        omega,
        degeneracy,
    })
}

/// Closed-form |Ω_{>0}| for families with an exact size formula.
pub fn analytic_size(family: Family, area: usize, block_width: usize) -> Result<u128> {
    if area == 0 {
        return Err(Error::contract("area must be positive"));
    }
    let enc = EncodingFamily::with_block_width(family, block_width)?;
    let pow = |base: u128, e: usize| -> Result<u128> {
        u32::try_from(e)
            .ok()
            .and_then(|e| base.checked_pow(e))
            .ok_or_else(|| Error::Capacity(format!("{base}^{e} overflows")))
    };
    match family {
        Family::Hamming => Ok(area as u128),
        Family::Binary => Ok(pow(2, area)? - 1),
        Family::Exponential if area == 1 => Ok(1),
        Family::Exponential => pow(2, area),
        Family::Ternary => Ok((pow(3, area)? - 1) / 2),
        Family::Golomb => {
            if area % block_width != 0 {
                return Err(Error::architecture(format!(
                    "block width {block_width} does not divide area {area}"
                )));
            }
            let marks = enc.fixed_eigenvalues().expect("golomb hamiltonian");
            let delta = difference_set(&FreqSet::integers(marks.iter().copied()))?.len() as u128;
            Ok((pow(delta, area / block_width)? - 1) / 2)
        }
        Family::Turnpike => Err(Error::Unsupported(
            "turnpike has only a containment bound; enumerate instead".into(),
        )),
    }
}

/// Containment bound Z_{((2K+1)^{A/q} − 1)/2} ⊆ Ω for turnpike encodings.
pub fn turnpike_bound(area: usize, block_width: usize) -> Result<u128> {
    let enc = EncodingFamily::with_block_width(Family::Turnpike, block_width)?;
    let k = turnpike_k(enc.fixed_eigenvalues().expect("turnpike hamiltonian")) as u128;
    let e = u32::try_from(area / block_width).map_err(|_| Error::contract("area too large"))?;
    let full = (2 * k + 1)
        .checked_pow(e)
        .ok_or_else(|| Error::Capacity("turnpike bound overflows".into()))?;
    Ok((full - 1) / 2)
}

/// True iff all pairwise differences of `marks` are distinct.
pub fn is_golomb_ruler(marks: &[i64]) -> bool {
    let mut seen = BTreeSet::new();
    for (i, &a) in marks.iter().enumerate() {
        for &b in &marks[i + 1..] {
            if !seen.insert((b - a).abs()) {
                return false;
            }
        }
    }
    true
}

/// Largest K′ with every integer in [−K′, K′] a pairwise difference.
pub fn turnpike_k(eigenvalues: &[i64]) -> u64 {
    if eigenvalues.is_empty() {
        return 0;
    }
    difference_set(&FreqSet::integers(eigenvalues.iter().copied()))
        .map(|d| d.max_gapfree_k())
        .unwrap_or(0)
}

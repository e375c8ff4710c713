//! Exact Boolean minimization of truth tables.
//!
//! Prime implicants come from the Quine-McCluskey pairing procedure over the
//! on-set plus don't-cares; minimal covers are enumerated exhaustively with a
//! Petrick-style product-of-sums expansion. All covers minimal by term count
//! and then by total literal count are returned, so equivalent models are
//! never collapsed silently.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::data::MAX_CONDITIONS;
use crate::error::{Error, Result};
use crate::truthtable::{OutputClass, TruthTable};

/// One position of a conjunction: the condition must be present, absent, or
/// does not matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Literal {
    Present,
    Absent,
    Free,
}

/// A conjunction of condition literals, stored as a fixed-width subcube.
/// Condition `i` maps to bit `k - 1 - i`, so a fully bound implicant's value
/// equals its truth-table row index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Implicant {
    k: usize,
    mask: u32,
    value: u32,
}

impl Implicant {
    pub fn from_literals(literals: &[Literal]) -> Self {
        let k = literals.len();
        let mut mask = 0u32;
        let mut value = 0u32;
        for (i, lit) in literals.iter().enumerate() {
            let bit = 1u32 << (k - 1 - i);
            match lit {
                Literal::Present => {
                    mask |= bit;
                    value |= bit;
                }
                Literal::Absent => mask |= bit,
                Literal::Free => {}
            }
        }
        Self { k, mask, value }
    }

    /// Parse a pattern like "1-0": '1' present, '0' absent, '-' free.
    pub fn from_pattern(pattern: &str) -> Option<Self> {
        let literals: Option<Vec<Literal>> = pattern
            .chars()
            .map(|c| match c {
                '1' => Some(Literal::Present),
                '0' => Some(Literal::Absent),
                '-' => Some(Literal::Free),
                _ => None,
            })
            .collect();
        Some(Self::from_literals(&literals?))
    }

    pub fn pattern(&self) -> String {
        (0..self.k)
            .map(|i| match self.literal(i) {
                Literal::Present => '1',
                Literal::Absent => '0',
                Literal::Free => '-',
            })
            .collect()
    }

    pub fn n_conditions(&self) -> usize {
        self.k
    }

    pub fn literal(&self, i: usize) -> Literal {
        let bit = 1u32 << (self.k - 1 - i);
        if self.mask & bit == 0 {
            Literal::Free
        } else if self.value & bit != 0 {
            Literal::Present
        } else {
            Literal::Absent
        }
    }

    pub fn literal_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_constant_true(&self) -> bool {
        self.mask == 0
    }

    pub fn covers(&self, config: u32) -> bool {
        config & self.mask == self.value
    }

    /// Subcube containment: every configuration of `self` is one of `other`.
    pub fn is_subcube_of(&self, other: &Implicant) -> bool {
        self.k == other.k
            && self.mask & other.mask == other.mask
            && self.value & other.mask == other.value
    }

    /// Render against condition names: "~name" for absent, "*" joins, the
    /// all-free term renders "1".
    pub fn render(&self, names: &[String]) -> String {
        if self.is_constant_true() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            match self.literal(i) {
                Literal::Present => parts.push(name.clone()),
                Literal::Absent => parts.push(format!("~{name}")),
                Literal::Free => {}
            }
        }
        parts.join("*")
    }

    /// Canonical sort key: fewer literals first, then the literal vector
    /// (present < absent < free, per condition).
    fn sort_key(&self) -> (usize, Vec<Literal>) {
        (
            self.literal_count(),
            (0..self.k).map(|i| self.literal(i)).collect(),
        )
    }
}

impl PartialOrd for Implicant {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Implicant {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Implicant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

impl Serialize for Implicant {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.pattern())
    }
}

impl<'de> Deserialize<'de> for Implicant {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Implicant::from_pattern(&s)
            .ok_or_else(|| D::Error::custom(format!("invalid implicant pattern {s:?}")))
    }
}

/// A disjunction of implicants in canonical term order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Model {
    terms: Vec<Implicant>,
}

impl Model {
    pub fn new(mut terms: Vec<Implicant>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyModel);
        }
        terms.sort();
        terms.dedup();
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[Implicant] {
        &self.terms
    }

    pub fn covers(&self, config: u32) -> bool {
        self.terms.iter().any(|t| t.covers(config))
    }
}

/// How logical remainders were used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionType {
    Conservative,
    Parsimonious,
    Intermediate,
}

/// Directional expectation for one condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    #[serde(rename = "1")]
    Present,
    #[serde(rename = "0")]
    Absent,
    #[serde(rename = "-")]
    None,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Present => "1",
            Expectation::Absent => "0",
            Expectation::None => "-",
        })
    }
}

/// All equivalent minimal models plus the terms shared by every model (EPIs)
/// and the terms that vary across models (SPIs). An empty model list means
/// "No solution".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub models: Vec<Model>,
    pub epi: Vec<Implicant>,
    pub spi: Vec<Implicant>,
    pub solution_type: SolutionType,
    pub dir_exp: Option<Vec<Expectation>>,
}

fn config_pattern(config: u32, k: usize) -> String {
    (0..k)
        .map(|i| {
            if config >> (k - 1 - i) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// All maximal subcubes of `on ∪ dc`, i.e. implicants that cover no negative
/// configuration and cannot have any literal freed without doing so. An
/// empty on-set yields no implicants (nothing to cover).
pub fn find_prime_implicants(on: &[u32], dc: &[u32], k: usize) -> Result<Vec<Implicant>> {
    if k == 0 {
        return Err(Error::NoConditions);
    }
    if k > MAX_CONDITIONS {
        return Err(Error::TooManyConditions {
            count: k,
            max: MAX_CONDITIONS,
        });
    }
    let on_set: BTreeSet<u32> = on.iter().copied().collect();
    let dc_set: BTreeSet<u32> = dc.iter().copied().collect();
    if let Some(config) = on_set.intersection(&dc_set).next() {
        return Err(Error::OverlappingSets {
            config: config_pattern(*config, k),
        });
    }
    if on_set.is_empty() {
        return Ok(Vec::new());
    }

    let full_mask = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut current: BTreeSet<(u32, u32)> = on_set
        .union(&dc_set)
        .map(|&config| (full_mask, config))
        .collect();
    let mut primes: BTreeSet<(u32, u32)> = BTreeSet::new();

    // Pair cubes differing in exactly one bound bit; anything never paired
    // is maximal.
    while !current.is_empty() {
        let mut combined: BTreeSet<(u32, u32)> = BTreeSet::new();
        let mut next: BTreeSet<(u32, u32)> = BTreeSet::new();
        for &(mask, value) in &current {
            for i in 0..k {
                let bit = 1u32 << i;
                if mask & bit != 0
                    && value & bit == 0
                    && current.contains(&(mask, value | bit))
                {
                    next.insert((mask & !bit, value));
                    combined.insert((mask, value));
                    combined.insert((mask, value | bit));
                }
            }
        }
        primes.extend(current.difference(&combined));
        current = next;
    }

    let mut result: Vec<Implicant> = primes
        .into_iter()
        .map(|(mask, value)| Implicant { k, mask, value })
        .collect();
    result.sort();
    Ok(result)
}

/// Dynamically sized bitset over prime-implicant indices.
#[derive(Clone, PartialEq, Eq)]
struct IndexSet {
    words: Vec<u64>,
}

impl IndexSet {
    fn new(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

/// Drop duplicate covers and covers that strictly contain another cover.
fn absorb(mut covers: Vec<IndexSet>) -> Vec<IndexSet> {
    covers.sort_by_key(IndexSet::len);
    let mut kept: Vec<IndexSet> = Vec::new();
    for cover in covers {
        if !kept.iter().any(|k| k.is_subset(&cover)) {
            kept.push(cover);
        }
    }
    kept
}

/// Enumerate every cover of the on-set that is minimal first by term count,
/// then by total literal count, via product-of-sums expansion with
/// absorption. An on-set configuration covered by no implicant (or an empty
/// on-set) yields an empty list, signalling "No solution".
pub fn enumerate_minimal_covers(pis: &[Implicant], on: &[u32]) -> Vec<Model> {
    if on.is_empty() || pis.is_empty() {
        return Vec::new();
    }

    let mut options: Vec<Vec<usize>> = Vec::with_capacity(on.len());
    for &config in on {
        let covering: Vec<usize> = pis
            .iter()
            .enumerate()
            .filter(|(_, pi)| pi.covers(config))
            .map(|(i, _)| i)
            .collect();
        if covering.is_empty() {
            return Vec::new();
        }
        options.push(covering);
    }
    // expanding tight clauses first keeps the intermediate product small
    options.sort_by_key(Vec::len);

    let mut covers = vec![IndexSet::new(pis.len())];
    for clause in &options {
        let mut next: Vec<IndexSet> = Vec::new();
        for cover in &covers {
            if clause.iter().any(|&i| cover.contains(i)) {
                next.push(cover.clone());
            } else {
                for &i in clause {
                    let mut extended = cover.clone();
                    extended.insert(i);
                    next.push(extended);
                }
            }
        }
        covers = absorb(next);
    }

    let min_terms = covers.iter().map(IndexSet::len).min().unwrap_or(0);
    covers.retain(|c| c.len() == min_terms);
    let literal_total =
        |c: &IndexSet| c.indices().map(|i| pis[i].literal_count()).sum::<usize>();
    let min_literals = covers.iter().map(literal_total).min().unwrap_or(0);
    covers.retain(|c| literal_total(c) == min_literals);

    let mut models: Vec<Model> = covers
        .into_iter()
        .map(|c| {
            Model::new(c.indices().map(|i| pis[i]).collect()).expect("cover is nonempty")
        })
        .collect();
    models.sort();
    models.dedup();
    models
}

/// Terms shared by every model (EPIs) and terms present in some but not all
/// models (SPIs), both in canonical order.
pub fn identify_epi_spi(models: &[Model]) -> Result<(Vec<Implicant>, Vec<Implicant>)> {
    if models.is_empty() {
        return Err(Error::NoModels);
    }
    let mut shared: BTreeSet<Implicant> = models[0].terms().iter().copied().collect();
    let mut union: BTreeSet<Implicant> = BTreeSet::new();
    for model in models {
        let terms: BTreeSet<Implicant> = model.terms().iter().copied().collect();
        shared = shared.intersection(&terms).copied().collect();
        union.extend(terms);
    }
    let epi: Vec<Implicant> = shared.iter().copied().collect();
    let spi: Vec<Implicant> = union.difference(&shared).copied().collect();
    Ok((epi, spi))
}

/// Build the intermediate model: each parsimonious parent term takes back
/// the literals of its conservative refinements whose polarity matches the
/// directional expectations.
pub fn derive_intermediate(
    conservative: &Model,
    parsimonious: &Model,
    dir_exp: &[Expectation],
) -> Result<Model> {
    let k = parsimonious.terms()[0].n_conditions();
    if dir_exp.len() != k {
        return Err(Error::DirExpLengthMismatch {
            expected: k,
            found: dir_exp.len(),
        });
    }

    let mut terms: Vec<Implicant> = Vec::new();
    for c in conservative.terms() {
        let parents: Vec<&Implicant> = parsimonious
            .terms()
            .iter()
            .filter(|p| c.is_subcube_of(p))
            .collect();
        if parents.is_empty() {
            return Err(Error::SandwichViolated);
        }
        for p in parents {
            let mut literals: Vec<Literal> = (0..k).map(|i| p.literal(i)).collect();
            for (i, slot) in literals.iter_mut().enumerate() {
                if *slot != Literal::Free {
                    continue;
                }
                match (c.literal(i), dir_exp[i]) {
                    (Literal::Present, Expectation::Present) => *slot = Literal::Present,
                    (Literal::Absent, Expectation::Absent) => *slot = Literal::Absent,
                    _ => {}
                }
            }
            terms.push(Implicant::from_literals(&literals));
        }
    }

    // absorption: drop any term whose configurations lie inside another's
    let absorbed: Vec<Implicant> = terms
        .iter()
        .filter(|t| {
            !terms
                .iter()
                .any(|other| *t != other && t.is_subcube_of(other))
        })
        .copied()
        .collect();
    Model::new(absorbed)
}

fn covers_of(tt: &TruthTable, dc: &[u32]) -> Result<Vec<Model>> {
    let on = tt.configs_with(OutputClass::Positive);
    let pis = find_prime_implicants(&on, dc, tt.n_conditions())?;
    Ok(enumerate_minimal_covers(&pis, &on))
}

/// Minimize a truth table into a conservative, parsimonious, or intermediate
/// solution set, depending on remainder inclusion and directional
/// expectations.
pub fn minimize(
    tt: &TruthTable,
    include_remainders: bool,
    dir_exp: Option<&[Expectation]>,
) -> Result<SolutionSet> {
    if let Some(exp) = dir_exp {
        if !include_remainders {
            return Err(Error::DirExpRequiresRemainders);
        }
        if exp.len() != tt.n_conditions() {
            return Err(Error::DirExpLengthMismatch {
                expected: tt.n_conditions(),
                found: exp.len(),
            });
        }
    }
    let solution_type = match (include_remainders, dir_exp) {
        (false, _) => SolutionType::Conservative,
        (true, None) => SolutionType::Parsimonious,
        (true, Some(_)) => SolutionType::Intermediate,
    };

    let on = tt.configs_with(OutputClass::Positive);
    let models = if on.is_empty() {
        Vec::new()
    } else {
        let remainders = tt.configs_with(OutputClass::Remainder);
        match solution_type {
            SolutionType::Conservative => covers_of(tt, &[])?,
            SolutionType::Parsimonious => covers_of(tt, &remainders)?,
            SolutionType::Intermediate => {
                let conservative = covers_of(tt, &[])?;
                let parsimonious = covers_of(tt, &remainders)?;
                let derived = derive_intermediate(
                    &conservative[0],
                    &parsimonious[0],
                    dir_exp.expect("checked above"),
                )?;
                vec![derived]
            }
        }
    };

    let (epi, spi) = if models.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        identify_epi_spi(&models)?
    };
    Ok(SolutionSet {
        models,
        epi,
        spi,
        solution_type,
        dir_exp: dir_exp.map(<[Expectation]>::to_vec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truthtable::build_truth_table;

    fn pi(pattern: &str) -> Implicant {
        Implicant::from_pattern(pattern).unwrap()
    }

    fn patterns(implicants: &[Implicant]) -> Vec<String> {
        implicants.iter().map(Implicant::pattern).collect()
    }

    #[test]
    fn pi_set_is_maximal_only() {
        // on = {110, 011}, dc = {001, 010, 100, 111}: every 2-config cube
        // with X2 bound present sits inside -1-, so only three cubes are
        // maximal.
        let pis =
            find_prime_implicants(&[0b110, 0b011], &[0b001, 0b010, 0b100, 0b111], 3).unwrap();
        assert_eq!(patterns(&pis), ["-1-", "0-1", "1-0"]);
        for p in &pis {
            assert!(!p.covers(0b000));
            assert!(!p.covers(0b101));
        }
    }

    #[test]
    fn empty_on_set_yields_nothing() {
        assert!(find_prime_implicants(&[], &[0b01, 0b10], 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn full_cube_collapses_to_constant_true() {
        let pis = find_prime_implicants(&[0, 1], &[], 1).unwrap();
        assert_eq!(patterns(&pis), ["-"]);
        assert!(pis[0].is_constant_true());
    }

    #[test]
    fn overlapping_sets_rejected() {
        assert!(matches!(
            find_prime_implicants(&[0b01], &[0b01], 2).unwrap_err(),
            Error::OverlappingSets { .. }
        ));
    }

    #[test]
    fn cyclic_cover_has_two_models() {
        let on = [0b000, 0b001, 0b010, 0b101, 0b110, 0b111];
        let pis = find_prime_implicants(&on, &[], 3).unwrap();
        assert_eq!(pis.len(), 6);
        let models = enumerate_minimal_covers(&pis, &on);
        assert_eq!(models.len(), 2);
        let rendered: Vec<Vec<String>> = models.iter().map(|m| patterns(m.terms())).collect();
        assert!(rendered.contains(&vec![
            "00-".to_string(),
            "1-1".to_string(),
            "-10".to_string()
        ]));
        assert!(rendered.contains(&vec![
            "0-0".to_string(),
            "-01".to_string(),
            "11-".to_string()
        ]));

        let (epi, spi) = identify_epi_spi(&models).unwrap();
        assert!(epi.is_empty());
        assert_eq!(spi.len(), 6);
    }

    #[test]
    fn single_term_cover() {
        // continues the maximality example: X2 alone covers the on-set
        let pis =
            find_prime_implicants(&[0b110, 0b011], &[0b001, 0b010, 0b100, 0b111], 3).unwrap();
        let models = enumerate_minimal_covers(&pis, &[0b110, 0b011]);
        assert_eq!(models.len(), 1);
        assert_eq!(patterns(models[0].terms()), ["-1-"]);
    }

    #[test]
    fn uncombinable_minterms_stay() {
        let on = [0b00, 0b11];
        let pis = find_prime_implicants(&on, &[], 2).unwrap();
        let models = enumerate_minimal_covers(&pis, &on);
        assert_eq!(models.len(), 1);
        assert_eq!(patterns(models[0].terms()), ["00", "11"]);
    }

    #[test]
    fn epi_spi_by_definition() {
        let p = pi("1--");
        let q = pi("-1-");
        let r = pi("--1");
        let models = vec![
            Model::new(vec![p, q]).unwrap(),
            Model::new(vec![p, r]).unwrap(),
        ];
        let (epi, spi) = identify_epi_spi(&models).unwrap();
        assert_eq!(epi, vec![p]);
        assert_eq!(spi, vec![q, r]);

        let single = vec![Model::new(vec![q]).unwrap()];
        let (epi, spi) = identify_epi_spi(&single).unwrap();
        assert_eq!(epi, vec![q]);
        assert!(spi.is_empty());

        assert!(matches!(
            identify_epi_spi(&[]).unwrap_err(),
            Error::NoModels
        ));
    }

    #[test]
    fn d0_three_solution_types() {
        let tt = build_truth_table(&crate::truthtable::tests::d0(), 0.8, 1).unwrap();

        let conservative = minimize(&tt, false, None).unwrap();
        assert_eq!(conservative.solution_type, SolutionType::Conservative);
        assert_eq!(conservative.models.len(), 1);
        assert_eq!(patterns(conservative.models[0].terms()), ["110", "011"]);

        let parsimonious = minimize(&tt, true, None).unwrap();
        assert_eq!(parsimonious.models.len(), 1);
        assert_eq!(patterns(parsimonious.models[0].terms()), ["-1-"]);

        let dir = [Expectation::Present; 3];
        let intermediate = minimize(&tt, true, Some(&dir)).unwrap();
        assert_eq!(intermediate.solution_type, SolutionType::Intermediate);
        assert_eq!(intermediate.models.len(), 1);
        assert_eq!(patterns(intermediate.models[0].terms()), ["11-", "-11"]);
        assert_eq!(intermediate.epi, intermediate.models[0].terms());
        assert!(intermediate.spi.is_empty());
    }

    #[test]
    fn intermediate_with_no_expectations_is_parsimonious() {
        let tt = build_truth_table(&crate::truthtable::tests::d0(), 0.8, 1).unwrap();
        let dir = [Expectation::None; 3];
        let intermediate = minimize(&tt, true, Some(&dir)).unwrap();
        let parsimonious = minimize(&tt, true, None).unwrap();
        assert_eq!(intermediate.models, parsimonious.models);
    }

    #[test]
    fn intermediate_passes_equal_terms_through() {
        let c = Model::new(vec![pi("11-")]).unwrap();
        let p = Model::new(vec![pi("11-")]).unwrap();
        let derived = derive_intermediate(&c, &p, &[Expectation::Present; 3]).unwrap();
        assert_eq!(derived.terms(), c.terms());
    }

    #[test]
    fn dir_exp_validation() {
        let tt = build_truth_table(&crate::truthtable::tests::d0(), 0.8, 1).unwrap();
        let dir = [Expectation::Present; 3];
        assert!(matches!(
            minimize(&tt, false, Some(&dir)).unwrap_err(),
            Error::DirExpRequiresRemainders
        ));
        let short = [Expectation::Present; 2];
        assert!(matches!(
            minimize(&tt, true, Some(&short)).unwrap_err(),
            Error::DirExpLengthMismatch { .. }
        ));
    }

    #[test]
    fn no_positive_rows_means_no_solution() {
        let mut bin = crate::truthtable::tests::d0();
        bin.outcome_membership = vec![0; 5];
        let tt = build_truth_table(&bin, 0.8, 1).unwrap();
        let sol = minimize(&tt, true, None).unwrap();
        assert!(sol.models.is_empty());
        assert!(sol.epi.is_empty() && sol.spi.is_empty());
    }

    #[test]
    fn canonical_term_order() {
        // fewer literals first, then present < absent < free per condition
        let mut terms = vec![pi("011"), pi("110"), pi("-1-"), pi("-11"), pi("11-")];
        terms.sort();
        assert_eq!(
            patterns(&terms),
            ["-1-", "11-", "-11", "110", "011"]
        );
    }

    #[test]
    fn render_terms() {
        let names: Vec<String> = ["X1", "X2", "X3"].map(String::from).to_vec();
        assert_eq!(pi("110").render(&names), "X1*X2*~X3");
        assert_eq!(pi("-1-").render(&names), "X2");
        assert_eq!(pi("---").render(&names), "1");
    }
}

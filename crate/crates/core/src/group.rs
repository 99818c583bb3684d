//! Group arithmetic for ℤ^d (d ≤ 3) and the discrete Heisenberg group,
//! finite subsets, Følner sequences, and their diagnostics.

use std::collections::{hash_map::Entry, HashMap, HashSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Ratio64 = Ratio<u64>;

/// A group element stored as up to three integer coordinates.
///
/// Ordering is lexicographic on the active coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    len: u8,
    coords: [i64; 3],
}

impl GroupElement {
    pub fn new(coords: &[i64]) -> Self {
        assert!(
            (1..=3).contains(&coords.len()),
            "group elements have 1 to 3 coordinates"
        );
        let mut c = [0; 3];
        c[..coords.len()].copy_from_slice(coords);
        GroupElement {
            len: coords.len() as u8,
            coords: c,
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Zd(u8),
    Heisenberg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    generators: Vec<GroupElement>,
}

impl GroupSpec {
    pub fn zd(d: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidArgument(format!("ℤ^d needs 1 ≤ d ≤ 3, got {d}")));
        }
        let mut generators = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = [0i64; 3];
            e[i] = 1;
            generators.push(GroupElement::new(&e[..d]));
            e[i] = -1;
            generators.push(GroupElement::new(&e[..d]));
        }
        Ok(GroupSpec {
            kind: GroupKind::Zd(d as u8),
            generators,
        })
    }

    pub fn z() -> Self {
        Self::zd(1).expect("d = 1")
    }

    pub fn heisenberg() -> Self {
        let generators = vec![
            GroupElement::new(&[1, 0, 0]),
            GroupElement::new(&[-1, 0, 0]),
            GroupElement::new(&[0, 1, 0]),
            GroupElement::new(&[0, -1, 0]),
        ];
        GroupSpec {
            kind: GroupKind::Heisenberg,
            generators,
        }
    }

    /// Replaces the default symmetric generating set. Inverses are added.
    pub fn with_generators(mut self, gens: Vec<GroupElement>) -> Result<Self> {
        let mut all = Vec::new();
        for g in gens {
            self.check(&g)?;
            let gi = self.inv(&g);
            for h in [g, gi] {
                if h != self.identity() && !all.contains(&h) {
                    all.push(h);
                }
            }
        }
        if all.is_empty() {
            return Err(Error::InvalidArgument("empty generating set".into()));
        }
        self.generators = all;
        Ok(self)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            GroupKind::Zd(d) => d as usize,
            GroupKind::Heisenberg => 3,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(&[0, 0, 0][..self.dim()])
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(GroupElement::new(coords))
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: g.dim(),
            });
        }
        Ok(())
    }

    /// Group law. Heisenberg: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
    pub fn try_mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// Unchecked group law; callers guarantee matching dimensions.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        debug_assert_eq!(g.dim(), h.dim());
        let mut out = *g;
        match self.kind {
            GroupKind::Zd(d) => {
                for i in 0..d as usize {
                    out.coords[i] += h.coords[i];
                }
            }
            GroupKind::Heisenberg => {
                let (a, b, c) = (g.coords[0], g.coords[1], g.coords[2]);
                let (a2, b2, c2) = (h.coords[0], h.coords[1], h.coords[2]);
                out.coords = [a + a2, b + b2, c + c2 + a * b2];
            }
        }
        out
    }

    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        let mut out = *g;
        match self.kind {
            GroupKind::Zd(d) => {
                for i in 0..d as usize {
                    out.coords[i] = -g.coords[i];
                }
            }
            GroupKind::Heisenberg => {
                let (a, b, c) = (g.coords[0], g.coords[1], g.coords[2]);
                out.coords = [-a, -b, -c + a * b];
            }
        }
        out
    }

    pub fn product_set(&self, a: &FiniteSubset, b: &FiniteSubset) -> FiniteSubset {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a.iter() {
            for y in b.iter() {
                out.push(self.mul(x, y));
            }
        }
        FiniteSubset::from_vec(out)
    }

    pub fn inverse_set(&self, a: &FiniteSubset) -> FiniteSubset {
        FiniteSubset::from_vec(a.iter().map(|g| self.inv(g)).collect())
    }

    /// `{g·f : f ∈ F}`.
    pub fn left_translate(&self, g: &GroupElement, f: &FiniteSubset) -> FiniteSubset {
        FiniteSubset::from_vec(f.iter().map(|x| self.mul(g, x)).collect())
    }

    /// `{f·g : f ∈ F}`.
    pub fn right_translate(&self, f: &FiniteSubset, g: &GroupElement) -> FiniteSubset {
        FiniteSubset::from_vec(f.iter().map(|x| self.mul(x, g)).collect())
    }

    /// `|F Δ gF| / |F|`, exact.
    pub fn folner_defect(&self, f: &FiniteSubset, g: &GroupElement) -> Ratio64 {
        assert!(!f.is_empty(), "Følner defect of an empty set");
        let kept = f.iter().filter(|x| f.contains(&self.mul(g, x))).count();
        let sym = 2 * (f.len() - kept);
        Ratio64::new(sym as u64, f.len() as u64)
    }
}

/// A finite set of group elements, stored sorted and deduplicated.
///
/// The sorted order (lexicographic on coordinates) is the canonical layout
/// used by patterns on this window.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteSubset {
    elements: Vec<GroupElement>,
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

impl FiniteSubset {
    pub fn from_vec(mut elements: Vec<GroupElement>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        FiniteSubset { elements }
    }

    /// Half-open integer box `∏ [lo_i, hi_i)`.
    pub fn box_set(ranges: &[(i64, i64)]) -> Self {
        let mut out = vec![Vec::<i64>::new()];
        for &(lo, hi) in ranges {
            let mut next = Vec::new();
            for prefix in &out {
                for v in lo..hi {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        FiniteSubset::from_vec(out.iter().map(|c| GroupElement::new(c)).collect())
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::box_set(&[(lo, hi)])
    }

    pub fn singleton(g: GroupElement) -> Self {
        FiniteSubset { elements: vec![g] }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        let mut v = self.elements.clone();
        v.extend_from_slice(&other.elements);
        FiniteSubset::from_vec(v)
    }

    /// If the set is a one-dimensional integer interval, its bounds `[lo, hi)`.
    pub fn as_interval(&self) -> Option<(i64, i64)> {
        let first = self.elements.first()?;
        if first.dim() != 1 {
            return None;
        }
        let lo = first.coords[0];
        let hi = self.elements.last()?.coords[0] + 1;
        (hi - lo == self.len() as i64).then_some((lo, hi))
    }
}

impl<'a> IntoIterator for &'a FiniteSubset {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FolnerRule {
    /// `F_n = [0, n)^d`.
    ZdBox,
    /// `F_n = [-n, n]^d`.
    SymmetricBox,
    /// `F_n = [0,n) × [0,n) × [0,n²)` in the Heisenberg group.
    HeisenbergBox,
    /// `F_1, F_2, …` listed explicitly.
    Explicit(Vec<FiniteSubset>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FolnerSequence {
    group: GroupSpec,
    rule: FolnerRule,
}

impl FolnerSequence {
    pub fn new(group: GroupSpec, rule: FolnerRule) -> Result<Self> {
        match (&rule, group.kind()) {
            (FolnerRule::ZdBox | FolnerRule::SymmetricBox, GroupKind::Zd(_)) => {}
            (FolnerRule::HeisenbergBox, GroupKind::Heisenberg) => {}
            (FolnerRule::Explicit(sets), _) => {
                if sets.is_empty() || sets.iter().any(|s| s.is_empty()) {
                    return Err(Error::InvalidArgument("explicit Følner sets must be nonempty".into()));
                }
                for s in sets {
                    for g in s {
                        group.check(g)?;
                    }
                }
            }
            (r, k) => {
                return Err(Error::InvalidArgument(format!(
                    "rule {r:?} does not apply to group {k:?}"
                )))
            }
        }
        Ok(FolnerSequence { group, rule })
    }

    pub fn zd_boxes(d: usize) -> Result<Self> {
        Self::new(GroupSpec::zd(d)?, FolnerRule::ZdBox)
    }

    pub fn heisenberg_boxes() -> Self {
        Self::new(GroupSpec::heisenberg(), FolnerRule::HeisenbergBox).expect("valid")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rule(&self) -> &FolnerRule {
        &self.rule
    }

    /// Largest available index, if the sequence is finite.
    pub fn max_index(&self) -> Option<usize> {
        match &self.rule {
            FolnerRule::Explicit(s) => Some(s.len()),
            _ => None,
        }
    }

    /// `F_n` for `n ≥ 1`.
    pub fn set(&self, n: usize) -> Result<FiniteSubset> {
        if n == 0 {
            return Err(Error::InvalidArgument("Følner index starts at 1".into()));
        }
        let n64 = n as i64;
        let d = self.group.dim();
        Ok(match &self.rule {
            FolnerRule::ZdBox => FiniteSubset::box_set(&vec![(0, n64); d]),
            FolnerRule::SymmetricBox => FiniteSubset::box_set(&vec![(-n64, n64 + 1); d]),
            FolnerRule::HeisenbergBox => FiniteSubset::box_set(&[(0, n64), (0, n64), (0, n64 * n64)]),
            FolnerRule::Explicit(sets) => sets.get(n - 1).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!("explicit sequence has {} sets, F_{n} requested", sets.len()))
            })?,
        })
    }

    /// `|F_n|`, in closed form for box rules.
    pub fn size(&self, n: usize) -> Result<usize> {
        let d = self.group.dim() as u32;
        Ok(match &self.rule {
            FolnerRule::ZdBox => n.pow(d),
            FolnerRule::SymmetricBox => (2 * n + 1).pow(d),
            FolnerRule::HeisenbergBox => n.pow(4),
            FolnerRule::Explicit(_) => self.set(n)?.len(),
        })
    }

    /// Exact prefix maximum of `|∪_{k<n} F_k⁻¹F_n| / |F_n|` over `2 ≤ n ≤ n_max`,
    /// with the maximizing `n`.
    pub fn shulman_constant(&self, n_max: usize) -> Result<(Ratio64, usize)> {
        if n_max < 2 {
            return Err(Error::InvalidArgument("shulman prefix needs n_max ≥ 2".into()));
        }
        let sets: Vec<FiniteSubset> = (1..=n_max).map(|n| self.set(n)).collect::<Result<_>>()?;
        let nested = sets.windows(2).all(|w| w[0].is_subset(&w[1]));
        let mut best = (Ratio64::new(0, 1), 2);
        for n in 2..=n_max {
            let fn_set = &sets[n - 1];
            let union = if nested {
                self.group.product_set(&self.group.inverse_set(&sets[n - 2]), fn_set)
            } else {
                let mut acc = FiniteSubset::default();
                for fk in &sets[..n - 1] {
                    let prod = self.group.product_set(&self.group.inverse_set(fk), fn_set);
                    acc = acc.union(&prod);
                }
                acc
            };
            let r = Ratio64::new(union.len() as u64, fn_set.len() as u64);
            if r > best.0 {
                best = (r, n);
            }
        }
        Ok(best)
    }

    /// `(n, |F_n|, |F_n|/ln n)` for `n` in `range` (all `n ≥ 2`).
    pub fn growth_ratios(&self, range: std::ops::RangeInclusive<usize>) -> Result<GrowthReport> {
        if *range.start() < 2 {
            return Err(Error::InvalidArgument("growth ratios need n ≥ 2".into()));
        }
        let mut rows = Vec::new();
        for n in range {
            let size = self.size(n)?;
            rows.push(GrowthRow {
                n,
                size,
                ratio: size as f64 / (n as f64).ln(),
            });
        }
        let first_non_increase = rows.windows(2).find(|w| w[1].ratio <= w[0].ratio).map(|w| w[1].n);
        Ok(GrowthReport {
            increasing: first_non_increase.is_none(),
            first_non_increase,
            rows,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub size: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub increasing: bool,
    /// First `n` whose ratio fails to exceed its predecessor's.
    pub first_non_increase: Option<usize>,
}

/// Deterministic enumeration `g_1 = e, g_2, …` by word length with respect
/// to the generating set, ties broken lexicographically on coordinates.
#[derive(Clone, Debug)]
pub struct Enumeration {
    group: GroupSpec,
}

/// Hard cap on breadth-first radius when ordering elements.
const MAX_WORD_RADIUS: u32 = 512;

impl Enumeration {
    pub fn new(group: GroupSpec) -> Self {
        Enumeration { group }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// The first `m` elements `[g_1, …, g_m]`.
    pub fn prefix(&self, m: usize) -> Vec<GroupElement> {
        assert!(m >= 1, "enumeration prefix needs m ≥ 1");
        let mut out = vec![self.group.identity()];
        let mut seen: HashSet<GroupElement> = out.iter().copied().collect();
        let mut frontier = out.clone();
        while out.len() < m {
            let mut layer = Vec::new();
            for g in &frontier {
                for s in self.group.generators() {
                    let h = self.group.mul(g, s);
                    if seen.insert(h) {
                        layer.push(h);
                    }
                }
            }
            layer.sort_unstable();
            out.extend_from_slice(&layer);
            frontier = layer;
        }
        out.truncate(m);
        out
    }

    /// Word lengths of the given elements.
    pub fn word_lengths(&self, elems: &[GroupElement]) -> Result<HashMap<GroupElement, u32>> {
        let mut remaining: HashSet<GroupElement> = elems.iter().copied().collect();
        let mut out = HashMap::with_capacity(remaining.len());
        if let GroupKind::Zd(_) = self.group.kind() {
            if self.is_default_zd() {
                for g in remaining {
                    out.insert(g, g.coords().iter().map(|c| c.unsigned_abs() as u32).sum());
                }
                return Ok(out);
            }
        }
        let e = self.group.identity();
        let mut dist: HashMap<GroupElement, u32> = HashMap::new();
        dist.insert(e, 0);
        let mut queue = VecDeque::from([e]);
        if remaining.remove(&e) {
            out.insert(e, 0);
        }
        while let Some(g) = queue.pop_front() {
            if remaining.is_empty() {
                break;
            }
            let dg = dist[&g];
            if dg >= MAX_WORD_RADIUS {
                break;
            }
            for s in self.group.generators() {
                let h = self.group.mul(&g, s);
                if let Entry::Vacant(e) = dist.entry(h) {
                    e.insert(dg + 1);
                    if remaining.remove(&h) {
                        out.insert(h, dg + 1);
                    }
                    queue.push_back(h);
                }
            }
        }
        if !remaining.is_empty() {
            return Err(Error::InvalidArgument(
                "elements beyond the word-length search radius".into(),
            ));
        }
        Ok(out)
    }

    /// Sorts elements in enumeration order.
    pub fn order(&self, elems: &[GroupElement]) -> Result<Vec<GroupElement>> {
        let lengths = self.word_lengths(elems)?;
        let mut v: Vec<GroupElement> = elems.to_vec();
        v.sort_by_key(|g| (lengths[g], *g));
        v.dedup();
        Ok(v)
    }

    fn is_default_zd(&self) -> bool {
        GroupSpec::zd(self.group.dim())
            .map(|d| d.generators == self.group.generators)
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    #[test]
    fn multiplication_examples() {
        let z2 = GroupSpec::zd(2).unwrap();
        assert_eq!(z2.try_mul(&e(&[1, 2]), &e(&[3, -1])).unwrap(), e(&[4, 1]));
        let h = GroupSpec::heisenberg();
        assert_eq!(h.mul(&e(&[1, 0, 0]), &e(&[0, 1, 0])), e(&[1, 1, 1]));
        assert_eq!(h.mul(&e(&[0, 1, 0]), &e(&[1, 0, 0])), e(&[1, 1, 0]));
        assert!(matches!(
            z2.try_mul(&e(&[1]), &e(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn heisenberg_inverse_matches_brute_force() {
        let h = GroupSpec::heisenberg();
        let g = e(&[1, 1, 1]);
        let mut found = None;
        for x in -3..=3 {
            for y in -3..=3 {
                for z in -3..=3 {
                    if h.mul(&g, &e(&[x, y, z])) == h.identity() {
                        found = Some(e(&[x, y, z]));
                    }
                }
            }
        }
        assert_eq!(found, Some(e(&[-1, -1, 0])));
        assert_eq!(h.inv(&g), e(&[-1, -1, 0]));
    }

    #[test]
    fn set_operations() {
        let z = GroupSpec::z();
        let a = FiniteSubset::interval(0, 3);
        let p = z.product_set(&a, &a);
        assert_eq!(p, FiniteSubset::interval(0, 5));
        assert_eq!(z.inverse_set(&a), FiniteSubset::interval(-2, 1));
    }

    #[test]
    fn folner_defect_examples() {
        let z = GroupSpec::z();
        assert_eq!(
            z.folner_defect(&FiniteSubset::interval(0, 10), &e(&[1])),
            Ratio64::new(2, 10)
        );
        let z2 = GroupSpec::zd(2).unwrap();
        let f = FiniteSubset::box_set(&[(0, 5), (0, 5)]);
        // brute-force symmetric difference
        let gf = z2.left_translate(&e(&[1, 0]), &f);
        let sym = f.iter().filter(|x| !gf.contains(x)).count() + gf.iter().filter(|x| !f.contains(x)).count();
        assert_eq!(sym, 10);
        assert_eq!(z2.folner_defect(&f, &e(&[1, 0])), Ratio64::new(10, 25));
        assert_eq!(z2.folner_defect(&f, &z2.identity()), Ratio64::new(0, 1));
    }

    #[test]
    fn shulman_examples() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let (c, n) = seq.shulman_constant(200).unwrap();
        assert_eq!(c, Ratio64::new(398, 200));
        assert_eq!(n, 200);

        let seq2 = FolnerSequence::zd_boxes(2).unwrap();
        let (c2, _) = seq2.shulman_constant(30).unwrap();
        assert!(c2 <= Ratio64::from_integer(4));

        let explicit = FolnerSequence::new(
            GroupSpec::z(),
            FolnerRule::Explicit(vec![FiniteSubset::interval(0, 1), FiniteSubset::interval(0, 2)]),
        )
        .unwrap();
        let (c3, _) = explicit.shulman_constant(2).unwrap();
        assert_eq!(c3, Ratio64::from_integer(1));
    }

    #[test]
    fn shulman_union_matches_nested_shortcut() {
        // Non-nested explicit sequence exercises the full union path.
        let sets = vec![
            FiniteSubset::interval(5, 6),
            FiniteSubset::interval(0, 3),
            FiniteSubset::interval(-4, 2),
        ];
        let seq = FolnerSequence::new(GroupSpec::z(), FolnerRule::Explicit(sets.clone())).unwrap();
        let (c, n) = seq.shulman_constant(3).unwrap();
        let z = GroupSpec::z();
        let mut best = Ratio64::new(0, 1);
        let mut arg = 0;
        for n in 2..=3 {
            let mut u: HashSet<GroupElement> = HashSet::new();
            for k in 0..n - 1 {
                for a in &sets[k] {
                    for b in &sets[n - 1] {
                        u.insert(z.mul(&z.inv(a), b));
                    }
                }
            }
            let r = Ratio64::new(u.len() as u64, sets[n - 1].len() as u64);
            if r > best {
                best = r;
                arg = n;
            }
        }
        assert_eq!((c, n), (best, arg));
    }

    #[test]
    fn growth_examples() {
        let seq = FolnerSequence::zd_boxes(1).unwrap();
        let g = seq.growth_ratios(10..=10).unwrap();
        assert!((g.rows[0].ratio - 10.0 / 10f64.ln()).abs() < 1e-12);
        assert!((g.rows[0].ratio - 4.3429).abs() < 1e-4);
        let seq2 = FolnerSequence::zd_boxes(2).unwrap();
        let g2 = seq2.growth_ratios(10..=10).unwrap();
        assert_eq!(g2.rows[0].size, 100);
        let constant = FolnerSequence::new(
            GroupSpec::z(),
            FolnerRule::Explicit(vec![FiniteSubset::interval(0, 5); 8]),
        )
        .unwrap();
        let g3 = constant.growth_ratios(2..=8).unwrap();
        assert!(!g3.increasing);
        assert_eq!(g3.first_non_increase, Some(3));
    }

    #[test]
    fn enumeration_prefixes() {
        let en = Enumeration::new(GroupSpec::z());
        assert_eq!(en.prefix(3), vec![e(&[0]), e(&[-1]), e(&[1])]);
        assert_eq!(en.prefix(5), vec![e(&[0]), e(&[-1]), e(&[1]), e(&[-2]), e(&[2])]);
        let en2 = Enumeration::new(GroupSpec::zd(2).unwrap());
        assert_eq!(en2.prefix(1), vec![e(&[0, 0])]);
        let hp = Enumeration::new(GroupSpec::heisenberg()).prefix(30);
        for m in 1..30 {
            assert_eq!(&Enumeration::new(GroupSpec::heisenberg()).prefix(m)[..], &hp[..m]);
        }
    }

    #[test]
    fn heisenberg_word_lengths_agree_with_prefix_layers() {
        let en = Enumeration::new(GroupSpec::heisenberg());
        let prefix = en.prefix(60);
        let lengths = en.word_lengths(&prefix).unwrap();
        let ordered = en.order(&prefix).unwrap();
        assert_eq!(ordered, prefix);
        assert_eq!(lengths[&GroupElement::new(&[1, 1, 1])], 2);
    }

    #[test]
    fn box_sequences_shrink_defect() {
        for seq in [
            FolnerSequence::zd_boxes(1).unwrap(),
            FolnerSequence::zd_boxes(2).unwrap(),
        ] {
            let g = seq.group().generators()[0];
            let d: Vec<Ratio64> = (4..=25)
                .map(|n| seq.group().folner_defect(&seq.set(n).unwrap(), &g))
                .collect();
            assert!(d.windows(2).all(|w| w[1] < w[0]));
            assert!(*d.last().unwrap() < Ratio64::new(1, 10));
        }
    }
}

//! Symbolic phase space `A^G`: patterns, cylinders, the left shift action,
//! Bowen windows under the enumeration metric, and admissible-pattern
//! enumeration for subshifts of finite type.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{Enumeration, FiniteSubset, GroupElement, GroupKind, GroupSpec};

/// Default cap on backtracking nodes visited during pattern enumeration.
pub const ENUMERATION_GUARD: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(u8);

impl Alphabet {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=36).contains(&k) {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be in 2..=36, got {k}"
            )));
        }
        Ok(Alphabet(k as u8))
    }

    pub fn size(&self) -> usize {
        self.0 as usize
    }
}

/// A total assignment of symbols to a finite window.
///
/// `symbols[i]` is the symbol at `window.as_slice()[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    window: FiniteSubset,
    symbols: Vec<u8>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_pattern(self))
    }
}

impl Pattern {
    pub fn new(window: FiniteSubset, symbols: Vec<u8>) -> Result<Self> {
        if window.len() != symbols.len() {
            return Err(Error::InvalidArgument(format!(
                "pattern has {} symbols for a window of {}",
                symbols.len(),
                window.len()
            )));
        }
        Ok(Pattern { window, symbols })
    }

    pub fn from_fn(window: FiniteSubset, f: impl Fn(&GroupElement) -> u8) -> Self {
        let symbols = window.iter().map(f).collect();
        Pattern { window, symbols }
    }

    pub fn window(&self) -> &FiniteSubset {
        &self.window
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn get(&self, g: &GroupElement) -> Option<u8> {
        self.window.index_of(g).map(|i| self.symbols[i])
    }

    pub fn restrict(&self, sub: &FiniteSubset) -> Result<Pattern> {
        let mut symbols = Vec::with_capacity(sub.len());
        for g in sub {
            symbols.push(
                self.get(g)
                    .ok_or_else(|| Error::InsufficientWindow(format!("pattern undefined at {g}")))?,
            );
        }
        Ok(Pattern {
            window: sub.clone(),
            symbols,
        })
    }

    /// True if the two patterns agree wherever both are defined.
    pub fn compatible(&self, other: &Pattern) -> bool {
        let (small, large) = if self.window.len() <= other.window.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .window
            .iter()
            .zip(&small.symbols)
            .all(|(g, s)| large.get(g).is_none_or(|t| t == *s))
    }
}

/// A cylinder set `{x : x|_W = p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pattern: Pattern,
}

impl Cylinder {
    pub fn new(pattern: Pattern) -> Self {
        Cylinder { pattern }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn window(&self) -> &FiniteSubset {
        &self.pattern.window
    }

    /// Intersection test in the full shift: the patterns agree on the overlap.
    pub fn intersects(&self, other: &Cylinder) -> bool {
        self.pattern.compatible(&other.pattern)
    }

    /// `other ⊆ self` in the full shift.
    pub fn contains(&self, other: &Cylinder) -> bool {
        self.window().is_subset(other.window()) && self.intersects(other)
    }

    pub fn contains_point(&self, x: &Pattern) -> bool {
        self.window().is_subset(x.window()) && self.pattern.compatible(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftSpace {
    group: GroupSpec,
    alphabet: Alphabet,
    forbidden: Vec<Pattern>,
}

impl ShiftSpace {
    pub fn new(group: GroupSpec, alphabet: Alphabet, forbidden: Vec<Pattern>) -> Result<Self> {
        for p in &forbidden {
            if p.window.is_empty() {
                return Err(Error::InvalidArgument("empty forbidden pattern".into()));
            }
            for g in p.window.iter() {
                group.check(g)?;
            }
            if p.symbols.iter().any(|&s| s as usize >= alphabet.size()) {
                return Err(Error::InvalidArgument(
                    "forbidden pattern uses symbols outside the alphabet".into(),
                ));
            }
        }
        Ok(ShiftSpace {
            group,
            alphabet,
            forbidden,
        })
    }

    pub fn full(group: GroupSpec, k: usize) -> Result<Self> {
        Self::new(group, Alphabet::new(k)?, Vec::new())
    }

    /// Binary ℤ-subshift forbidding the word `11`.
    pub fn golden_mean() -> Self {
        let p = Pattern::new(FiniteSubset::interval(0, 2), vec![1, 1]).expect("two symbols");
        Self::new(GroupSpec::z(), Alphabet(2), vec![p]).expect("valid")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn is_full(&self) -> bool {
        self.forbidden.is_empty()
    }

    /// No translate of a forbidden pattern lying inside the window occurs.
    pub fn is_locally_admissible(&self, x: &Pattern) -> bool {
        let constraints = self.constraints(&x.window);
        constraints
            .iter()
            .all(|c| !c.cells.iter().zip(&c.symbols).all(|(&i, &s)| x.symbols[i] == s))
    }

    /// Translates `P·h` of each forbidden pattern that fit inside `window`,
    /// as (positions in window, required symbols).
    fn constraints(&self, window: &FiniteSubset) -> Vec<Constraint> {
        let mut out = Vec::new();
        for p in &self.forbidden {
            let q0 = p.window.as_slice()[0];
            let q0_inv = self.group.inv(&q0);
            for w in window {
                let h = self.group.mul(&q0_inv, w);
                let cells: Option<Vec<usize>> = p
                    .window
                    .iter()
                    .map(|q| window.index_of(&self.group.mul(q, &h)))
                    .collect();
                if let Some(cells) = cells {
                    out.push(Constraint {
                        cells,
                        symbols: p.symbols.clone(),
                    });
                }
            }
        }
        out.sort_by(|a, b| (&a.cells, &a.symbols).cmp(&(&b.cells, &b.symbols)));
        out.dedup_by(|a, b| a.cells == b.cells && a.symbols == b.symbols);
        out
    }

    /// All locally admissible patterns on `window`, in lexicographic order of
    /// their symbol strings.
    pub fn admissible_patterns(&self, window: &FiniteSubset) -> Result<Vec<Pattern>> {
        self.admissible_patterns_with(window, &Pattern::empty(), ENUMERATION_GUARD)
    }

    /// Admissible patterns on `window` that agree with `fixed` on the overlap.
    pub fn admissible_patterns_with(&self, window: &FiniteSubset, fixed: &Pattern, guard: u64) -> Result<Vec<Pattern>> {
        let mut out = Vec::new();
        self.search(window, fixed, guard, |sym| {
            out.push(Pattern {
                window: window.clone(),
                symbols: sym.to_vec(),
            })
        })?;
        Ok(out)
    }

    /// Raw symbol vectors of admissible patterns on `window` agreeing with `fixed`.
    pub(crate) fn admissible_symbols_with(
        &self,
        window: &FiniteSubset,
        fixed: &Pattern,
        guard: u64,
    ) -> Result<Vec<Box<[u8]>>> {
        let mut out = Vec::new();
        self.search(window, fixed, guard, |sym| out.push(sym.into()))?;
        Ok(out)
    }

    fn search(&self, window: &FiniteSubset, fixed: &Pattern, guard: u64, mut emit: impl FnMut(&[u8])) -> Result<()> {
        let n = window.len();
        let k = self.alphabet.size() as u8;
        let choices: Vec<Vec<u8>> = window
            .iter()
            .map(|g| match fixed.get(g) {
                Some(s) => vec![s],
                None => (0..k).collect(),
            })
            .collect();
        if choices.iter().any(|c| c.iter().any(|&s| s >= k)) {
            return Ok(());
        }
        let candidates: f64 = choices.iter().map(|c| c.len() as f64).product();
        if self.forbidden.is_empty() && candidates > guard as f64 {
            return Err(Error::BudgetExceeded {
                what: "pattern enumeration",
                needed: candidates.min(u128::MAX as f64) as u128,
                limit: guard as u128,
            });
        }
        let constraints = self.constraints(window);
        let by_last = completing_constraints(&constraints, n);
        let mut buf = vec![0u8; n];
        let mut visited = 0u64;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        // iterative DFS: (position, next choice index)
        if n == 0 {
            emit(&buf);
            return Ok(());
        }
        while let Some(&mut (pos, ref mut next)) = stack.last_mut() {
            if *next >= choices[pos].len() {
                stack.pop();
                continue;
            }
            buf[pos] = choices[pos][*next];
            *next += 1;
            visited += 1;
            if visited > guard {
                return Err(Error::BudgetExceeded {
                    what: "pattern enumeration",
                    needed: visited as u128,
                    limit: guard as u128,
                });
            }
            let violated = by_last[pos]
                .iter()
                .any(|c| c.cells.iter().zip(&c.symbols).all(|(&i, &s)| buf[i] == s));
            if violated {
                continue;
            }
            if pos + 1 == n {
                emit(&buf);
            } else {
                stack.push((pos + 1, 0));
            }
        }
        Ok(())
    }

    /// Number of locally admissible patterns on `window`.
    pub fn count_admissible(&self, window: &FiniteSubset) -> Result<BigUint> {
        if self.forbidden.is_empty() {
            return Ok(num_traits::pow(BigUint::from(self.alphabet.size()), window.len()));
        }
        if let (GroupKind::Zd(1), Some((lo, hi))) = (self.group.kind(), window.as_interval()) {
            return Ok(self.count_interval(lo, hi));
        }
        let mut count = BigUint::zero();
        self.search(window, &Pattern::empty(), ENUMERATION_GUARD, |_| count += 1u32)?;
        Ok(count)
    }

    /// Transfer-matrix count on the interval `[lo, hi)` of ℤ.
    fn count_interval(&self, lo: i64, hi: i64) -> BigUint {
        let span = self
            .forbidden
            .iter()
            .map(|p| {
                let s = p.window.as_slice();
                (s[s.len() - 1].coords()[0] - s[0].coords()[0] + 1) as usize
            })
            .max()
            .unwrap_or(1);
        let memory = span.saturating_sub(1);
        // Forbidden words anchored so their last cell is at offset 0.
        let words: Vec<Vec<(usize, u8)>> = self
            .forbidden
            .iter()
            .map(|p| {
                let s = p.window.as_slice();
                let last = s[s.len() - 1].coords()[0];
                s.iter()
                    .zip(&p.symbols)
                    .map(|(g, &sym)| ((last - g.coords()[0]) as usize, sym))
                    .collect()
            })
            .collect();
        let k = self.alphabet.size() as u8;
        // state: the last `memory` symbols, most recent last
        let mut states: BTreeMap<Vec<u8>, BigUint> = BTreeMap::new();
        states.insert(Vec::new(), BigUint::one());
        for _ in lo..hi {
            let mut next: BTreeMap<Vec<u8>, BigUint> = BTreeMap::new();
            for (hist, count) in &states {
                for a in 0..k {
                    let mut ext = hist.clone();
                    ext.push(a);
                    let len = ext.len();
                    let bad = words.iter().any(|w| {
                        w.iter().all(|&(back, sym)| back < len && ext[len - 1 - back] == sym)
                            && w.iter().all(|&(back, _)| back < len)
                    });
                    if bad {
                        continue;
                    }
                    let keep = len.saturating_sub(memory);
                    let key = ext[keep..].to_vec();
                    *next.entry(key).or_insert_with(BigUint::zero) += count;
                }
            }
            states = next;
        }
        states.values().fold(BigUint::zero(), |acc, c| acc + c)
    }
}

struct Constraint {
    cells: Vec<usize>,
    symbols: Vec<u8>,
}

fn completing_constraints(constraints: &[Constraint], n: usize) -> Vec<Vec<&Constraint>> {
    let mut by_last: Vec<Vec<&Constraint>> = (0..n).map(|_| Vec::new()).collect();
    for c in constraints {
        let last = *c.cells.iter().max().expect("nonempty");
        by_last[last].push(c);
    }
    by_last
}

impl Pattern {
    pub fn empty() -> Self {
        Pattern {
            window: FiniteSubset::default(),
            symbols: Vec::new(),
        }
    }
}

/// A radius `ε ∈ (0, 1/2]`, stored exactly.
pub type Epsilon = Ratio<u64>;

pub fn eps(num: u64, den: u64) -> Epsilon {
    Epsilon::new(num, den)
}

/// The metric `d(x,y) = 2^{-min{i : x(g_i) ≠ y(g_i)}}` built on a group
/// enumeration; an ε-ball is a cylinder on the first `m(ε)` elements.
#[derive(Clone, Debug)]
pub struct MetricSpec {
    enumeration: Enumeration,
}

impl MetricSpec {
    pub fn new(group: GroupSpec) -> Self {
        MetricSpec {
            enumeration: Enumeration::new(group),
        }
    }

    pub fn enumeration(&self) -> &Enumeration {
        &self.enumeration
    }

    pub fn group(&self) -> &GroupSpec {
        self.enumeration.group()
    }

    /// `m(ε) = ⌊log₂(1/ε)⌋`, the largest `m` with `2^m·ε ≤ 1`.
    pub fn depth(&self, epsilon: Epsilon) -> Result<usize> {
        depth_of(epsilon)
    }

    /// Depth used for 5ε-enlargements: `max(1, m(ε) − 2)`.
    pub fn enlarged_depth(&self, epsilon: Epsilon) -> Result<usize> {
        Ok(self.depth(epsilon)?.saturating_sub(2).max(1))
    }

    /// `E_m · F = {g_i·g : i ≤ m, g ∈ F}`.
    pub fn window_at_depth(&self, f: &FiniteSubset, m: usize) -> FiniteSubset {
        let e = FiniteSubset::from_vec(self.enumeration.prefix(m));
        self.group().product_set(&e, f)
    }

    /// `W(F, ε)`: `y ∈ B_F(x, ε)` iff `y = x` on this window.
    pub fn bowen_window(&self, f: &FiniteSubset, epsilon: Epsilon) -> Result<FiniteSubset> {
        Ok(self.window_at_depth(f, self.depth(epsilon)?))
    }

    pub fn bowen_ball(&self, x: &Pattern, f: &FiniteSubset, epsilon: Epsilon) -> Result<Cylinder> {
        let w = self.bowen_window(f, epsilon)?;
        Ok(Cylinder::new(x.restrict(&w)?))
    }

    /// `d(x, y)` on patterns defined on the first `m` enumerated elements;
    /// `None` when the first difference lies beyond both windows.
    pub fn distance(&self, x: &Pattern, y: &Pattern, m: usize) -> Result<Option<Ratio<u64>>> {
        for (i, g) in self.enumeration.prefix(m).iter().enumerate() {
            let a = x
                .get(g)
                .ok_or_else(|| Error::InsufficientWindow(format!("x undefined at {g}")))?;
            let b = y
                .get(g)
                .ok_or_else(|| Error::InsufficientWindow(format!("y undefined at {g}")))?;
            if a != b {
                return Ok(Some(Ratio::new(1, 1u64 << (i + 1))));
            }
        }
        Ok(None)
    }
}

pub fn depth_of(epsilon: Epsilon) -> Result<usize> {
    let (p, q) = (*epsilon.numer(), *epsilon.denom());
    if p == 0 || 2 * p > q {
        return Err(Error::EpsilonOutOfRange(format!("{p}/{q}")));
    }
    let mut m = 0usize;
    while (p as u128) << (m + 1) <= q as u128 {
        m += 1;
    }
    Ok(m)
}

/// `(g·x)(h) = x(hg)` on the requested output window.
pub fn act(group: &GroupSpec, g: &GroupElement, x: &Pattern, out: &FiniteSubset) -> Result<Pattern> {
    group.check(g)?;
    let mut symbols = Vec::with_capacity(out.len());
    for h in out {
        let hg = group.mul(h, g);
        symbols.push(
            x.get(&hg)
                .ok_or_else(|| Error::InsufficientWindow(format!("shifted pattern needs x at {hg}")))?,
        );
    }
    Ok(Pattern {
        window: out.clone(),
        symbols,
    })
}

fn symbol_char(s: u8) -> char {
    std::char::from_digit(s as u32, 36).expect("symbol < 36")
}

/// Formats a pattern literal, e.g. `box[0,4) : 0110` or `pts[(0,0),(2,1)] : 01`.
///
/// Symbols are listed in lexicographic coordinate order, so for boxes the
/// last coordinate varies fastest (row-major with the first coordinate as
/// the row index).
pub fn format_pattern(p: &Pattern) -> String {
    let syms: String = p.symbols.iter().map(|&s| symbol_char(s)).collect();
    if let Some(spec) = box_spec(&p.window) {
        return format!("{spec} : {syms}");
    }
    let pts: Vec<String> = p.window.iter().map(|g| g.to_string()).collect();
    format!("pts[{}] : {syms}", pts.join(","))
}

fn box_spec(w: &FiniteSubset) -> Option<String> {
    let first = w.as_slice().first()?;
    let d = first.dim();
    let mut ranges = Vec::with_capacity(d);
    for i in 0..d {
        let lo = w.iter().map(|g| g.coords()[i]).min()?;
        let hi = w.iter().map(|g| g.coords()[i]).max()? + 1;
        ranges.push((lo, hi));
    }
    let volume: i64 = ranges.iter().map(|(a, b)| b - a).product();
    if volume as usize != w.len() {
        return None;
    }
    let parts: Vec<String> = ranges.iter().map(|(a, b)| format!("[{a},{b})")).collect();
    Some(format!("box{}", parts.join("x")))
}

/// Parses a window spec: `box[a,b)`, `box[a,b)x[c,d)`, … or
/// `pts[p1,p2,…]` with points written `3` or `(1,2)`.
pub fn parse_window(spec: &str) -> Result<FiniteSubset> {
    let s = spec.trim();
    let bad = |why: &str| Error::Parse(format!("bad window {spec:?}: {why}"));
    if let Some(rest) = s.strip_prefix("box") {
        let mut ranges = Vec::new();
        for part in rest.split('x') {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| bad("expected [lo,hi)"))?;
            let (lo, hi) = inner.split_once(',').ok_or_else(|| bad("expected lo,hi"))?;
            let lo: i64 = lo.trim().parse().map_err(|_| bad("lo"))?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad("hi"))?;
            if hi <= lo {
                return Err(bad("empty range"));
            }
            ranges.push((lo, hi));
        }
        if ranges.is_empty() || ranges.len() > 3 {
            return Err(bad("1 to 3 ranges"));
        }
        return Ok(FiniteSubset::box_set(&ranges));
    }
    if let Some(rest) = s.strip_prefix("pts[") {
        let inner = rest.strip_suffix(']').ok_or_else(|| bad("missing ]"))?;
        let mut pts = Vec::new();
        let mut token = String::new();
        let mut depth = 0;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    pts.push(std::mem::take(&mut token));
                    continue;
                }
                _ => {}
            }
            token.push(c);
        }
        if !token.trim().is_empty() {
            pts.push(token);
        }
        let mut elems = Vec::new();
        for p in pts {
            let p = p.trim().trim_start_matches('(').trim_end_matches(')');
            let coords: std::result::Result<Vec<i64>, _> = p.split(',').map(|c| c.trim().parse::<i64>()).collect();
            let coords = coords.map_err(|_| bad("point coordinate"))?;
            if coords.is_empty() || coords.len() > 3 {
                return Err(bad("1 to 3 coordinates"));
            }
            elems.push(GroupElement::new(&coords));
        }
        if elems.is_empty() {
            return Err(bad("no points"));
        }
        let d = elems[0].dim();
        if elems.iter().any(|g| g.dim() != d) {
            return Err(bad("mixed dimensions"));
        }
        return Ok(FiniteSubset::from_vec(elems));
    }
    Err(bad("expected box[..] or pts[..]"))
}

/// Parses `window-spec : symbols`.
pub fn parse_pattern(literal: &str) -> Result<Pattern> {
    let (w, syms) = literal
        .rsplit_once(':')
        .ok_or_else(|| Error::Parse(format!("pattern {literal:?} lacks ':'")))?;
    let window = parse_window(w)?;
    let symbols: Option<Vec<u8>> = syms.trim().chars().map(|c| c.to_digit(36).map(|d| d as u8)).collect();
    let symbols = symbols.ok_or_else(|| Error::Parse(format!("bad symbols in {literal:?}")))?;
    Pattern::new(window, symbols)
}

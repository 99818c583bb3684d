use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, FolnerSequence};
use crate::shift_space::{format_pattern, Cylinder, Epsilon, MetricSpec, Pattern, ShiftSpace, ENUMERATION_GUARD};

/// The set `Z` being covered, relative to an ambient shift space `X`.
#[derive(Clone, Debug)]
pub enum TargetSet {
    Whole,
    Empty,
    /// Finite union of cylinders (intersected with `X`).
    Cylinders(Vec<Cylinder>),
    /// A subshift `Z ⊆ X` on the same group and alphabet.
    SubShift(ShiftSpace),
}

impl TargetSet {
    pub fn cylinder(p: Pattern) -> Self {
        TargetSet::Cylinders(vec![Cylinder::new(p)])
    }

    fn windows(&self) -> Vec<FiniteSubset> {
        match self {
            TargetSet::Cylinders(cs) => cs.iter().map(|c| c.window().clone()).collect(),
            _ => Vec::new(),
        }
    }

    fn combined(&self, s: &ShiftSpace) -> Result<Option<ShiftSpace>> {
        match self {
            TargetSet::SubShift(z) => {
                if z.group() != s.group() || z.alphabet() != s.alphabet() {
                    return Err(Error::InvalidArgument(
                        "subshift target must share group and alphabet with the ambient space".into(),
                    ));
                }
                let mut forbidden = s.forbidden().to_vec();
                forbidden.extend_from_slice(z.forbidden());
                Ok(Some(ShiftSpace::new(s.group().clone(), s.alphabet(), forbidden)?))
            }
            _ => Ok(None),
        }
    }

    /// Whether the atom `p` (a locally admissible pattern of the ambient
    /// space) meets the target. Cylinder windows must lie inside `p`'s window.
    pub fn meets(&self, s: &ShiftSpace, p: &Pattern) -> Result<bool> {
        Ok(match self {
            TargetSet::Whole => true,
            TargetSet::Empty => false,
            TargetSet::Cylinders(cs) => cs.iter().any(|c| c.contains_point(p)),
            TargetSet::SubShift(_) => self.combined(s)?.expect("subshift").is_locally_admissible(p),
        })
    }
}

/// Locally admissible patterns of `s` on `window` that meet `target`, as raw
/// symbol vectors sorted lexicographically.
pub(crate) fn enumerate_atoms(s: &ShiftSpace, window: &FiniteSubset, target: &TargetSet) -> Result<Vec<Box<[u8]>>> {
    let mut atoms = match target {
        TargetSet::Empty => Vec::new(),
        TargetSet::Whole => s.admissible_symbols_with(window, &Pattern::empty(), ENUMERATION_GUARD)?,
        TargetSet::SubShift(_) => {
            let z = target.combined(s)?.expect("subshift");
            z.admissible_symbols_with(window, &Pattern::empty(), ENUMERATION_GUARD)?
        }
        TargetSet::Cylinders(cs) => {
            let mut all = Vec::new();
            for c in cs {
                if !c.window().is_subset(window) {
                    return Err(Error::InsufficientWindow(
                        "target cylinder extends beyond the atom window".into(),
                    ));
                }
                all.extend(s.admissible_symbols_with(window, c.pattern(), ENUMERATION_GUARD)?);
            }
            all
        }
    };
    atoms.sort();
    atoms.dedup();
    Ok(atoms)
}

#[derive(Clone, Debug, Serialize)]
pub struct Ball {
    #[serde(serialize_with = "ser_cylinder")]
    pub cylinder: Cylinder,
    /// Følner index `n_i`.
    pub scale: usize,
    /// Cost exponent `|F_{n_i}|`.
    pub size: usize,
    /// Index into [`BallFamily::windows`].
    pub window: usize,
}

fn ser_cylinder<S: serde::Serializer>(c: &Cylinder, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_pattern(c.pattern()))
}

/// All distinct cylinders on the windows `E_m·F_n`, `n_min ≤ n ≤ n_max`,
/// that meet the target; one ball per (window, pattern).
#[derive(Clone, Debug)]
pub struct BallFamily {
    pub depth: usize,
    pub epsilon: Option<Epsilon>,
    pub n_min: usize,
    pub n_max: usize,
    /// Distinct windows, sorted by size.
    pub windows: Vec<FiniteSubset>,
    pub balls: Vec<Ball>,
}

impl BallFamily {
    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Union of all ball windows.
    pub fn union_window(&self) -> FiniteSubset {
        let all = self.windows.iter().flat_map(|w| w.iter().copied()).collect();
        FiniteSubset::from_vec(all)
    }

    /// Windows form a chain under inclusion, so the balls form a laminar family.
    pub fn is_nested(&self) -> bool {
        self.windows.windows(2).all(|p| p[0].is_subset(&p[1]))
    }

    /// Sizes `|F_n|` used as cost exponents, one per window.
    pub fn window_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.windows.len()];
        for b in &self.balls {
            sizes[b.window] = b.size;
        }
        sizes
    }

    /// The sub-family of balls with the given window index.
    pub fn balls_at(&self, window: usize) -> impl Iterator<Item = (usize, &Ball)> {
        self.balls.iter().enumerate().filter(move |(_, b)| b.window == window)
    }
}

/// Bowen balls `B_{F_n}(x, ε)`, `N ≤ n ≤ N_max`, meeting `Z`.
pub fn candidate_balls(
    s: &ShiftSpace,
    seq: &FolnerSequence,
    epsilon: Epsilon,
    n_min: usize,
    n_max: usize,
    target: &TargetSet,
) -> Result<BallFamily> {
    let metric = MetricSpec::new(s.group().clone());
    let depth = metric.depth(epsilon)?;
    let mut fam = balls_at_depth(s, seq, depth, n_min, n_max, target)?;
    fam.epsilon = Some(epsilon);
    Ok(fam)
}

/// Cylinders on `E_m·F_n` meeting `Z`; `m = r + 1` gives the words of the
/// refined partition cover of depth `r`.
pub fn balls_at_depth(
    s: &ShiftSpace,
    seq: &FolnerSequence,
    depth: usize,
    n_min: usize,
    n_max: usize,
    target: &TargetSet,
) -> Result<BallFamily> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidArgument(format!("scale range [{n_min}, {n_max}]")));
    }
    if seq.group() != s.group() {
        return Err(Error::InvalidArgument("Følner sequence on a different group".into()));
    }
    let metric = MetricSpec::new(s.group().clone());
    // window -> (largest |F_n|, its n)
    let mut by_window: BTreeMap<FiniteSubset, (usize, usize)> = BTreeMap::new();
    for n in n_min..=n_max {
        let f = seq.set(n)?;
        let w = metric.window_at_depth(&f, depth);
        let e = by_window.entry(w).or_insert((f.len(), n));
        if f.len() > e.0 {
            *e = (f.len(), n);
        }
    }
    let mut windows: Vec<(FiniteSubset, (usize, usize))> = by_window.into_iter().collect();
    windows.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));

    let mut star: Vec<_> = windows.iter().flat_map(|(w, _)| w.iter().copied()).collect();
    for w in target.windows() {
        star.extend(w.iter().copied());
    }
    let star = FiniteSubset::from_vec(star);
    let atoms = enumerate_atoms(s, &star, target)?;

    let mut balls = Vec::new();
    for (wi, (w, (size, n))) in windows.iter().enumerate() {
        let pos: Vec<usize> = w.iter().map(|g| star.index_of(g).expect("window in union")).collect();
        let mut pats: Vec<Vec<u8>> = atoms.iter().map(|a| pos.iter().map(|&i| a[i]).collect()).collect();
        pats.sort();
        pats.dedup();
        for p in pats {
            balls.push(Ball {
                cylinder: Cylinder::new(Pattern::new(w.clone(), p)?),
                scale: *n,
                size: *size,
                window: wi,
            });
        }
    }
    Ok(BallFamily {
        depth,
        epsilon: None,
        n_min,
        n_max,
        windows: windows.into_iter().map(|(w, _)| w).collect(),
        balls,
    })
}

/// The finite σ-algebra generated by a ball family: locally admissible
/// patterns on the union window `W*` that meet a support set, with the
/// atom–ball incidence relation.
#[derive(Clone, Debug)]
pub struct AtomSpace {
    window: FiniteSubset,
    atoms: Vec<Box<[u8]>>,
    ball_atoms: Vec<Vec<u32>>,
    atom_balls: Vec<Vec<u32>>,
}

impl AtomSpace {
    pub fn new(s: &ShiftSpace, family: &BallFamily, support: &TargetSet) -> Result<Self> {
        let mut star: Vec<_> = family.union_window().iter().copied().collect();
        for w in support.windows() {
            star.extend(w.iter().copied());
        }
        let window = FiniteSubset::from_vec(star);
        let atoms = enumerate_atoms(s, &window, support)?;

        let mut lookup: Vec<HashMap<&[u8], u32>> = vec![HashMap::new(); family.windows.len()];
        for (i, b) in family.balls.iter().enumerate() {
            lookup[b.window].insert(b.cylinder.pattern().symbols(), i as u32);
        }
        let positions: Vec<Vec<usize>> = family
            .windows
            .iter()
            .map(|w| {
                w.iter()
                    .map(|g| window.index_of(g).expect("ball window in W*"))
                    .collect()
            })
            .collect();
        let mut ball_atoms = vec![Vec::new(); family.balls.len()];
        let mut atom_balls = Vec::with_capacity(atoms.len());
        let mut key = Vec::new();
        for (ai, a) in atoms.iter().enumerate() {
            let mut mine = Vec::new();
            for (wi, pos) in positions.iter().enumerate() {
                key.clear();
                key.extend(pos.iter().map(|&i| a[i]));
                if let Some(&b) = lookup[wi].get(key.as_slice()) {
                    mine.push(b);
                    ball_atoms[b as usize].push(ai as u32);
                }
            }
            mine.sort_unstable();
            atom_balls.push(mine);
        }
        Ok(AtomSpace {
            window,
            atoms,
            ball_atoms,
            atom_balls,
        })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn window(&self) -> &FiniteSubset {
        &self.window
    }

    pub fn atom(&self, i: usize) -> Pattern {
        Pattern::new(self.window.clone(), self.atoms[i].to_vec()).expect("atom symbols")
    }

    pub fn atoms_of(&self, ball: usize) -> &[u32] {
        &self.ball_atoms[ball]
    }

    pub fn balls_of(&self, atom: usize) -> &[u32] {
        &self.atom_balls[atom]
    }

    pub fn uncovered(&self) -> usize {
        self.atom_balls.iter().filter(|b| b.is_empty()).count()
    }

    /// Indicator of a target set on the atoms; cylinder windows must lie in `W*`.
    pub fn indicator(&self, s: &ShiftSpace, z: &TargetSet) -> Result<Vec<bool>> {
        (0..self.len()).map(|i| z.meets(s, &self.atom(i))).collect()
    }
}

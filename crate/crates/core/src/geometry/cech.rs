use std::collections::BTreeMap;

use super::cover::Cover;
use super::fields::{line_bundle_keys, window_keys, FieldKey, LineBundleLie, SectionKey, ThetaLie};
use super::hypersurface::Hypersurface;
use super::GeometryError;
use crate::bisimplicial::{BisemicosimplicialDgla, BisemicosimplicialDgvs, GridLie};
use crate::dgla::LieStructure;
use crate::graded::{BasisLabel, CochainComplex, GradedVectorSpace};
use crate::linalg::{axpy, Basis, SparseMatrix, SparseVec};
use crate::scalar::Scalar;
use crate::simplicial::{LevelwiseLie, SemicosimplicialDgla, SemicosimplicialDgvs};

/// Smallest window at which sections are built for a degree-`d`
/// hypersurface.
pub fn required_window(degree: u32) -> u32 {
    degree + 2
}

/// A finite basis of fields on `U_set`, inside the span of the regular
/// field keys whose weights lie in the window.
#[derive(Clone, Debug)]
pub struct WindowedSections<S> {
    pub set: Vec<usize>,
    pub window: u32,
    /// All regular keys in the window; `basis` lives in their span.
    pub keys: Vec<FieldKey>,
    pub basis: Vec<SparseVec<FieldKey, S>>,
    index: BTreeMap<FieldKey, usize>,
    lookup: Basis<S>,
}

impl<S: Scalar> WindowedSections<S> {
    fn new(set: Vec<usize>, window: u32, keys: Vec<FieldKey>, basis: Vec<SparseVec<FieldKey, S>>) -> Self {
        let index: BTreeMap<FieldKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let lookup = Basis::new(basis.iter().map(|v| v.iter().map(|(k, c)| (index[k], c.clone())).collect()))
            .expect("section basis is independent");
        Self { set, window, keys, basis, index, lookup }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates in `basis`, or `None` if `v` is not a windowed section.
    pub fn coordinates(&self, v: &SparseVec<FieldKey, S>) -> Option<SparseVec<usize, S>> {
        let mut idx = SparseVec::new();
        for (k, c) in v {
            idx.insert(*self.index.get(k)?, c.clone());
        }
        self.lookup.coordinates(&idx)
    }

    pub fn contains(&self, v: &SparseVec<FieldKey, S>) -> bool {
        self.coordinates(v).is_some()
    }
}

/// The sheaves whose Čech objects are built here.
#[derive(Debug)]
pub enum Sheaf<'a, S> {
    Theta,
    LogTheta(&'a Hypersurface<S>),
}

impl<S> Clone for Sheaf<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for Sheaf<'_, S> {}

pub fn theta_sections<S: Scalar>(cover: &Cover, set: &[usize], w: u32) -> Result<WindowedSections<S>, GeometryError> {
    cover.check_multi_index(set)?;
    if w < 1 {
        return Err(GeometryError::WindowTooSmall { window: w, required: 1 });
    }
    let keys = window_keys(cover.n, set, w);
    let basis = keys.iter().map(|k| SparseVec::from([(k.clone(), S::one())])).collect();
    Ok(WindowedSections::new(set.to_vec(), w, keys, basis))
}

/// Windowed fields `θ` on `U_set` with `θ(F) ∈ (F)`.
pub fn log_theta_sections<S: Scalar>(
    cover: &Cover,
    set: &[usize],
    z: &Hypersurface<S>,
    w: u32,
) -> Result<WindowedSections<S>, GeometryError> {
    cover.check_multi_index(set)?;
    if z.n != cover.n {
        return Err(GeometryError::DimensionMismatch { cover: cover.n, subscheme: z.n });
    }
    let required = required_window(z.degree);
    if w < required {
        return Err(GeometryError::WindowTooSmall { window: w, required });
    }
    let keys = window_keys(cover.n, set, w);
    let kernel = z.residual_matrix(&keys).kernel();
    let basis = kernel.into_iter().map(|v| v.into_iter().map(|(i, c)| (keys[i].clone(), c)).collect()).collect();
    Ok(WindowedSections::new(set.to_vec(), w, keys, basis))
}

pub fn sections<S: Scalar>(cover: &Cover, sheaf: Sheaf<'_, S>, set: &[usize], w: u32) -> Result<WindowedSections<S>, GeometryError> {
    match sheaf {
        Sheaf::Theta => theta_sections(cover, set, w),
        Sheaf::LogTheta(z) => log_theta_sections(cover, set, z, w),
    }
}

/// Section spaces of every multi-index, level by level.
#[derive(Clone, Debug)]
pub struct CechSections<S> {
    pub levels: Vec<Vec<WindowedSections<S>>>,
}

impl<S: Scalar> CechSections<S> {
    pub fn build(cover: &Cover, sheaf: Sheaf<'_, S>, w: u32) -> Result<Self, GeometryError> {
        let mut levels = Vec::new();
        for n in 0..cover.num_levels() {
            let mut level = Vec::new();
            for set in cover.multi_indices(n) {
                level.push(sections(cover, sheaf, &set, w)?);
            }
            levels.push(level);
        }
        Ok(Self { levels })
    }

    pub fn level_dim(&self, n: usize) -> usize {
        self.levels[n].iter().map(|s| s.dim()).sum()
    }

    fn offsets(&self, n: usize) -> Vec<usize> {
        let mut acc = 0;
        self.levels[n]
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.dim();
                o
            })
            .collect()
    }

    /// Level-`n` element as a vector of field keys.
    pub fn embed(&self, n: usize, v: &SparseVec<usize, S>) -> SparseVec<FieldKey, S> {
        let offs = self.offsets(n);
        let mut out = SparseVec::new();
        for (i, c) in v {
            let s = offs.partition_point(|&o| o <= *i) - 1;
            axpy(&mut out, c, &self.levels[n][s].basis[i - offs[s]]);
        }
        out
    }

    /// Coordinates of a level-`n` element given by field keys.
    pub fn coordinates(&self, n: usize, v: &SparseVec<FieldKey, S>) -> Option<SparseVec<usize, S>> {
        let offs = self.offsets(n);
        let mut by_set: BTreeMap<&[usize], SparseVec<FieldKey, S>> = BTreeMap::new();
        for (k, c) in v {
            by_set.entry(&k.set[..]).or_default().insert(k.clone(), c.clone());
        }
        let mut out = SparseVec::new();
        for (set, part) in by_set {
            let s = self.levels[n].iter().position(|x| x.set == set)?;
            for (i, c) in self.levels[n][s].coordinates(&part)? {
                out.insert(offs[s] + i, c);
            }
        }
        Some(out)
    }

    fn labels(&self, n: usize, prefix: &str) -> GradedVectorSpace {
        let mut labels = Vec::new();
        for s in &self.levels[n] {
            let set: String = s.set.iter().map(|i| i.to_string()).collect();
            for b in 0..s.dim() {
                labels.push(BasisLabel { name: format!("{prefix}(U{set})[{b}]"), degree: 0 });
            }
        }
        GradedVectorSpace::from_labels_unchecked(labels)
    }

    /// The Čech semicosimplicial DGLA: levels in degree 0, cofaces the
    /// restrictions `(∂_k x)_{i_0…i_h} = x_{i_0…î_k…i_h}`.
    pub fn cech_lie(&self, n: usize, prefix: &str) -> Result<SemicosimplicialDgla<S, ThetaLie>, GeometryError> {
        let (dgvs, embed) = self.parts(n, prefix)?;
        Ok(SemicosimplicialDgla::new(dgvs, ThetaLie { n }, embed)?)
    }

    /// Unchecked linear data and embedding of [`CechSections::cech_lie`].
    #[allow(clippy::type_complexity)]
    fn parts(&self, n: usize, prefix: &str) -> Result<(SemicosimplicialDgvs<S>, Vec<Vec<SparseVec<FieldKey, S>>>), GeometryError> {
        let ambient = ThetaLie { n };
        let levels: Vec<CochainComplex<S>> =
            (0..self.levels.len()).map(|l| CochainComplex::zero_differential(self.labels(l, prefix))).collect();
        let mut cofaces = Vec::new();
        for l in 1..self.levels.len() {
            let mut maps = Vec::new();
            for k in 0..=l {
                let cols = (0..self.level_dim(l - 1))
                    .map(|b| {
                        let v = LevelwiseLie::<S>::coface_vec(&ambient, k, &self.embed(l - 1, &SparseVec::from([(b, S::one())])));
                        self.coordinates(l, &v).ok_or(GeometryError::RestrictionLeavesWindow { level: l, k })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                maps.push(SparseMatrix::from_cols(self.level_dim(l), cols));
            }
            cofaces.push(maps);
        }
        let embed = (0..self.levels.len())
            .map(|l| self.levels[l].iter().flat_map(|s| s.basis.iter().cloned()).collect())
            .collect();
        Ok((SemicosimplicialDgvs { levels, cofaces }, embed))
    }
}

/// Čech semicosimplicial Lie algebra of Θ or Θ(−log Z) on the cover.
pub fn cech_lie<S: Scalar>(
    cover: &Cover,
    sheaf: Sheaf<'_, S>,
    w: u32,
) -> Result<SemicosimplicialDgla<S, ThetaLie>, GeometryError> {
    let prefix = match sheaf {
        Sheaf::Theta => "Θ",
        Sheaf::LogTheta(_) => "Θlog",
    };
    CechSections::build(cover, sheaf, w)?.cech_lie(cover.n, prefix)
}

/// Čech object of `O(twist)` as an abelian semicosimplicial Lie algebra.
pub fn cech_line_bundle<S: Scalar>(
    cover: &Cover,
    twist: i32,
    w: u32,
) -> Result<SemicosimplicialDgla<S, LineBundleLie>, GeometryError> {
    let ambient = LineBundleLie { n: cover.n, twist };
    let keys: Vec<Vec<SectionKey>> = (0..cover.num_levels())
        .map(|l| cover.multi_indices(l).iter().flat_map(|set| line_bundle_keys(cover.n, twist, set, w)).collect())
        .collect();
    let levels = keys
        .iter()
        .map(|ks| {
            let labels = ks
                .iter()
                .map(|(set, a)| BasisLabel { name: format!("O({twist})({set:?},{a:?})"), degree: 0 })
                .collect();
            CochainComplex::zero_differential(GradedVectorSpace::from_labels_unchecked(labels))
        })
        .collect();
    let mut cofaces = Vec::new();
    for l in 1..keys.len() {
        let index: BTreeMap<&SectionKey, usize> = keys[l].iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut maps = Vec::new();
        for k in 0..=l {
            let cols = keys[l - 1]
                .iter()
                .map(|key| LevelwiseLie::<S>::coface(&ambient, k, key).into_iter().map(|(t, c)| (index[&t], c)).collect())
                .collect();
            maps.push(SparseMatrix::from_cols(keys[l].len(), cols));
        }
        cofaces.push(maps);
    }
    let embed = keys.iter().map(|ks| ks.iter().map(|k| SparseVec::from([(k.clone(), S::one())])).collect()).collect();
    Ok(SemicosimplicialDgla::new(SemicosimplicialDgvs::new(levels, cofaces)?, ambient, embed)?)
}

/// Two columns of fields: column 0 holds log fields, column 1 all fields.
/// Keys are `(column, field)`; as a grid, rows are Čech levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiLie {
    pub theta: ThetaLie,
}

pub type ColumnKey = (usize, FieldKey);

fn tag<S: Scalar>(column: usize, v: SparseVec<FieldKey, S>) -> SparseVec<ColumnKey, S> {
    v.into_iter().map(|(k, c)| ((column, k), c)).collect()
}

impl<S: Scalar> LieStructure<S> for ChiLie {
    type Key = ColumnKey;

    fn degree(&self, _k: &ColumnKey) -> i32 {
        0
    }

    fn differential(&self, _k: &ColumnKey) -> SparseVec<ColumnKey, S> {
        SparseVec::new()
    }

    fn bracket(&self, a: &ColumnKey, b: &ColumnKey) -> SparseVec<ColumnKey, S> {
        if a.0 != b.0 {
            return SparseVec::new();
        }
        tag(a.0, LieStructure::<S>::bracket(&self.theta, &a.1, &b.1))
    }
}

impl<S: Scalar> GridLie<S> for ChiLie {
    fn position(&self, key: &ColumnKey) -> (usize, usize) {
        (key.0, key.1.set.len() - 1)
    }

    fn horizontal(&self, s: usize, key: &ColumnKey) -> SparseVec<ColumnKey, S> {
        if s == 0 && key.0 == 0 {
            SparseVec::from([((1, key.1.clone()), S::one())])
        } else {
            SparseVec::new()
        }
    }

    fn vertical(&self, k: usize, key: &ColumnKey) -> SparseVec<ColumnKey, S> {
        tag(key.0, LevelwiseLie::<S>::coface(&self.theta, k, &key.1))
    }
}

/// The same two columns viewed as a morphism `χ: L → Θ` of single Lie
/// algebras on one open: level = column, `∂_0 = χ`, `∂_1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeLie {
    pub theta: ThetaLie,
}

impl<S: Scalar> LieStructure<S> for ConeLie {
    type Key = ColumnKey;

    fn degree(&self, _k: &ColumnKey) -> i32 {
        0
    }

    fn differential(&self, _k: &ColumnKey) -> SparseVec<ColumnKey, S> {
        SparseVec::new()
    }

    fn bracket(&self, a: &ColumnKey, b: &ColumnKey) -> SparseVec<ColumnKey, S> {
        ChiLie { theta: self.theta }.bracket(a, b)
    }
}

impl<S: Scalar> LevelwiseLie<S> for ConeLie {
    fn level(&self, key: &ColumnKey) -> usize {
        key.0
    }

    fn coface(&self, k: usize, key: &ColumnKey) -> SparseVec<ColumnKey, S> {
        GridLie::<S>::horizontal(&ChiLie { theta: self.theta }, k, key)
    }
}

fn inclusion<S: Scalar>(from: &CechSections<S>, to: &CechSections<S>, level: usize) -> Result<SparseMatrix<S>, GeometryError> {
    let cols = (0..from.level_dim(level))
        .map(|b| {
            let v = from.embed(level, &SparseVec::from([(b, S::one())]));
            to.coordinates(level, &v).ok_or(GeometryError::NotSubsheaf { level })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseMatrix::from_cols(to.level_dim(level), cols))
}

/// `χ: Θ(−log Z)(U_i) ↪ Θ(U_i)` on one chart, as a two-level
/// semicosimplicial Lie algebra.
pub fn chart_inclusion<S: Scalar>(
    cover: &Cover,
    z: &Hypersurface<S>,
    chart: usize,
    w: u32,
) -> Result<SemicosimplicialDgla<S, ConeLie>, GeometryError> {
    let log = log_theta_sections(cover, &[chart], z, w)?;
    let theta = theta_sections::<S>(cover, &[chart], w)?;
    let space = |prefix: &str, d: usize| GradedVectorSpace::concentrated(prefix, 0, d);
    let levels = vec![
        CochainComplex::zero_differential(space("Θlog", log.dim())),
        CochainComplex::zero_differential(space("Θ", theta.dim())),
    ];
    let cols = log
        .basis
        .iter()
        .map(|v| theta.coordinates(v).ok_or(GeometryError::NotSubsheaf { level: 0 }))
        .collect::<Result<Vec<_>, _>>()?;
    let chi = SparseMatrix::from_cols(theta.dim(), cols);
    let zero = SparseMatrix::zeros(theta.dim(), log.dim());
    let embed = vec![
        log.basis.iter().map(|v| tag(0, v.clone())).collect(),
        theta.basis.iter().map(|v| tag(1, v.clone())).collect(),
    ];
    let ambient = ConeLie { theta: ThetaLie { n: cover.n } };
    Ok(SemicosimplicialDgla::new(SemicosimplicialDgvs::new(levels, vec![vec![chi, zero]])?, ambient, embed)?)
}

/// Section data behind [`chi_bisemicosimplicial`].
#[derive(Clone, Debug)]
pub struct ChiSections<S> {
    pub log: CechSections<S>,
    pub theta: CechSections<S>,
}

impl<S: Scalar> ChiSections<S> {
    pub fn build(cover: &Cover, z: &Hypersurface<S>, w: u32) -> Result<Self, GeometryError> {
        Ok(Self { log: CechSections::build(cover, Sheaf::LogTheta(z), w)?, theta: CechSections::build(cover, Sheaf::Theta, w)? })
    }

    /// The two-column grid: left the Čech object of Θ(−log Z), right that
    /// of Θ, `∂^H_0` the inclusion and `∂^H_1 = 0`.
    pub fn grid(&self, n: usize) -> Result<BisemicosimplicialDgla<S, ChiLie>, GeometryError> {
        let left = self.log.parts(n, "Θlog")?;
        let right = self.theta.parts(n, "Θ")?;
        let height = self.log.levels.len();
        let horizontal = vec![(0..height)
            .map(|j| {
                let inc = inclusion(&self.log, &self.theta, j)?;
                let zero = SparseMatrix::zeros(self.theta.level_dim(j), self.log.level_dim(j));
                Ok(vec![inc, zero])
            })
            .collect::<Result<Vec<_>, GeometryError>>()?];
        let dgvs = BisemicosimplicialDgvs::new(
            vec![left.0.levels, right.0.levels],
            horizontal,
            vec![left.0.cofaces, right.0.cofaces],
        )?;
        let mut embed: Vec<Vec<SparseVec<ColumnKey, S>>> = Vec::new();
        for (col, e) in [left.1, right.1].iter().enumerate() {
            for level in e {
                embed.push(level.iter().map(|v| tag(col, v.clone())).collect());
            }
        }
        Ok(BisemicosimplicialDgla::new(dgvs, ChiLie { theta: ThetaLie { n } }, embed)?)
    }
}

/// `χ^▲` for `Θ(−log Z) ↪ Θ` on the cover.
pub fn chi_bisemicosimplicial<S: Scalar>(
    cover: &Cover,
    z: &Hypersurface<S>,
    w: u32,
) -> Result<BisemicosimplicialDgla<S, ChiLie>, GeometryError> {
    ChiSections::build(cover, z, w)?.grid(cover.n)
}

/// Evaluates `f` at `w` and `w + 2` and refuses to report a value that
/// changes.
pub fn stable_at<T: PartialEq + std::fmt::Debug>(
    what: &str,
    w: u32,
    f: impl Fn(u32) -> Result<T, GeometryError>,
) -> Result<T, GeometryError> {
    let a = f(w)?;
    let b = f(w + 2)?;
    if a != b {
        return Err(GeometryError::Unstable { what: what.into(), window: w, low: format!("{a:?}"), high: format!("{b:?}") });
    }
    Ok(a)
}

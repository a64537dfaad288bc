//! JSON manifests. Every number that lives in a ring is an exact string literal.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use twk_core::cochain::{ActionSite, CechSite, Cell, CellSite, Cochain, NondecreasingSite};
use twk_core::dgresolution::{ComplexObj, SimplexObj};
use twk_core::equivariant::EquivariantComplex;
use twk_core::exactalg::{format_scalar, parse_scalar, GradedMap, GradedModule, Matrix, Ring, RingHom};
use twk_core::simplicial::{Group, GroupAction, RingedCover};
use twk_core::twisted::TwPerfComplex;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, ActionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
    /// Objects built from one manifest share a single cover.
    #[serde(skip)]
    pub(crate) built_cover: OnceLock<Arc<RingedCover>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    /// Set on self-test reproducers so `twk selftest --replay` can rerun the trial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selftest: Option<Replay>,
}

impl Options {
    fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Replay {
    pub suite: String,
    pub seed: u64,
    pub trial: usize,
    #[serde(default)]
    pub inject_bad: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub opens: Vec<String>,
    pub nerve: Vec<Vec<String>>,
    /// Ring used for every nerve set without an explicit entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rings: Vec<RingEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restrictions: Vec<RestrictionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingEntry {
    pub set: Vec<String>,
    pub ring: String,
}

/// `images[i]` is the image of the i-th variable of the smaller set's ring.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionEntry {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub images: Vec<String>,
}

/// `act[x][g] = x·g`; group elements are indices into `group`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub group: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectSpec {
    /// Local modules per open; level-0 components are the local differentials.
    Twisted { ranks: BTreeMap<String, BTreeMap<String, usize>>, components: Vec<ComponentSpec> },
    Equivariant { action: String, ring: String, points: Vec<PointSpec>, components: Vec<ComponentSpec> },
    /// An object of the `n`-simplex resolution, `n + 1 = points.len()`.
    Simplex { ring: String, points: Vec<PointSpec>, components: Vec<ComponentSpec> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub ranks: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<BlockSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub tuple: Vec<Label>,
    /// `[k, q]`: simplicial level and internal degree.
    pub bidegree: [i32; 2],
    pub blocks: Vec<BlockSpec>,
}

/// The block from source degree `degree`; `rows[r][c]` is a scalar literal.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub degree: i32,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub from: String,
    pub to: String,
    pub degree: i32,
    pub components: Vec<ComponentSpec>,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Name(s) => f.write_str(s),
        }
    }
}

fn fmt_tuple(t: &[Label]) -> String {
    format!("({})", t.iter().map(Label::to_string).collect::<Vec<_>>().join(","))
}

/// A manifest object after ingestion.
#[derive(Clone, Debug)]
pub enum Object {
    Twisted(TwPerfComplex),
    Equivariant(EquivariantComplex),
    Simplex(SimplexObj),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Twisted(_) => "twisted",
            Object::Equivariant(_) => "equivariant",
            Object::Simplex(_) => "simplex",
        }
    }
}

pub fn load(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_ring(s: &str) -> Result<Ring> {
    s.parse::<Ring>().map_err(|e| anyhow!("ring {s:?}: {e}"))
}

fn parse_degree(s: &str) -> Result<i32> {
    s.trim().parse().map_err(|_| anyhow!("degree key {s:?} is not an integer"))
}

fn build_module(ranks: &BTreeMap<String, usize>) -> Result<GradedModule> {
    let pairs = ranks.iter().map(|(d, r)| Ok((parse_degree(d)?, *r))).collect::<Result<Vec<_>>>()?;
    Ok(GradedModule::new(pairs))
}

fn build_matrix(ring: &Ring, rows: usize, cols: usize, table: &[Vec<String>]) -> Result<Matrix> {
    if table.len() != rows || table.iter().any(|r| r.len() != cols) {
        let got_cols = table.first().map_or(0, Vec::len);
        bail!("block is {}x{got_cols}, expected {rows}x{cols}", table.len());
    }
    let mut m = Matrix::zeros(ring, rows, cols);
    for (i, row) in table.iter().enumerate() {
        for (j, lit) in row.iter().enumerate() {
            let v = parse_scalar(ring, lit).map_err(|e| anyhow!("scalar {lit:?} in {ring}: {e}"))?;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

pub fn build_map(ring: &Ring, source: &GradedModule, target: &GradedModule, degree: i32, blocks: &[BlockSpec]) -> Result<GradedMap> {
    let mut f = GradedMap::zero(ring, source, target, degree);
    for b in blocks {
        let m = build_matrix(ring, target.rank(b.degree + degree), source.rank(b.degree), &b.rows)
            .with_context(|| format!("block at source degree {}", b.degree))?;
        f.set_block(b.degree, m)?;
    }
    Ok(f)
}

pub fn block_specs(f: &GradedMap) -> Vec<BlockSpec> {
    let ring = f.ring();
    f.blocks()
        .map(|(d, m)| BlockSpec {
            degree: d,
            rows: (0..m.rows()).map(|r| (0..m.cols()).map(|c| format_scalar(ring, m.get(r, c))).collect()).collect(),
        })
        .collect()
}

fn resolve_indices(tuple: &[Label]) -> Result<Cell> {
    tuple
        .iter()
        .map(|l| match l {
            Label::Index(i) => Ok(*i),
            Label::Name(s) => bail!("expected an index, found {s:?}"),
        })
        .collect()
}

fn check_bidegree(c: &ComponentSpec, level: usize, degree: i32) -> Result<()> {
    let k = c.tuple.len() as i32 - 1;
    if c.bidegree != [k, degree - k] {
        bail!("tuple {} of level {level} needs bidegree [{k}, {}], found {:?}", fmt_tuple(&c.tuple), degree - k, c.bidegree);
    }
    Ok(())
}

/// Builds components over `site`; `degree` is the total degree of the cochain.
fn build_components<S: CellSite + ?Sized>(
    site: &S,
    source: &[GradedModule],
    target: &[GradedModule],
    degree: i32,
    comps: &[ComponentSpec],
    resolve: impl Fn(&[Label]) -> Result<Cell>,
) -> Result<Vec<(Cell, GradedMap)>> {
    comps
        .iter()
        .map(|c| {
            let cell = resolve(&c.tuple)?;
            if cell.is_empty() || !site.contains(&cell) {
                bail!("tuple {} is not a cell", fmt_tuple(&c.tuple));
            }
            let k = cell.len() - 1;
            check_bidegree(c, k, degree)?;
            let s = &source[site.first(&cell)];
            let t = &target[site.last(&cell)];
            let map = build_map(site.ring(&cell), s, t, degree - k as i32, &c.blocks)
                .with_context(|| format!("component at {}", fmt_tuple(&c.tuple)))?;
            Ok((cell, map))
        })
        .collect()
}

impl Manifest {
    pub fn cover(&self) -> Result<Arc<RingedCover>> {
        if let Some(c) = self.built_cover.get() {
            return Ok(c.clone());
        }
        let cover = self.build_cover()?;
        Ok(self.built_cover.get_or_init(|| cover).clone())
    }

    fn build_cover(&self) -> Result<Arc<RingedCover>> {
        let spec = self.cover.as_ref().ok_or_else(|| anyhow!("manifest has no cover section"))?;
        let index = |name: &String| {
            spec.opens.iter().position(|o| o == name).ok_or_else(|| anyhow!("unknown open {name:?}"))
        };
        let set = |names: &[String]| -> Result<Vec<usize>> {
            let mut s = names.iter().map(index).collect::<Result<Vec<_>>>()?;
            s.sort_unstable();
            Ok(s)
        };
        let nerve = spec.nerve.iter().map(|s| set(s)).collect::<Result<Vec<_>>>()?;
        let mut rings = BTreeMap::new();
        if let Some(default) = &spec.ring {
            let r = parse_ring(default)?;
            for s in &nerve {
                rings.insert(s.clone(), r.clone());
            }
        }
        for e in &spec.rings {
            rings.insert(set(&e.set)?, parse_ring(&e.ring)?);
        }
        if let Some(s) = nerve.iter().find(|s| !rings.contains_key(*s)) {
            bail!("no ring for nerve set {s:?}");
        }
        let mut restrictions = Vec::new();
        for e in &spec.restrictions {
            let (from, to) = (set(&e.from)?, set(&e.to)?);
            let src = rings.get(&from).ok_or_else(|| anyhow!("{:?} is not in the nerve", e.from))?.clone();
            let tgt = rings.get(&to).ok_or_else(|| anyhow!("{:?} is not in the nerve", e.to))?.clone();
            let images = e
                .images
                .iter()
                .map(|lit| parse_scalar(&tgt, lit).map_err(|err| anyhow!("image {lit:?} in {tgt}: {err}")))
                .collect::<Result<Vec<_>>>()?;
            let h = RingHom::new(src, tgt, images).map_err(|err| anyhow!("restriction {:?} → {:?}: {err}", e.from, e.to))?;
            restrictions.push((from, to, h));
        }
        let cover = RingedCover::new(spec.opens.clone(), nerve, rings, restrictions)?;
        Ok(Arc::new(cover))
    }

    pub fn action(&self, name: &str) -> Result<Arc<GroupAction>> {
        let spec = self.actions.get(name).ok_or_else(|| anyhow!("unknown action {name:?}"))?;
        let group = Group::from_table(spec.group.clone())?;
        Ok(Arc::new(GroupAction::new(group, spec.act.clone())?))
    }

    fn object_spec(&self, name: &str) -> Result<&ObjectSpec> {
        self.objects.get(name).ok_or_else(|| anyhow!("unknown object {name:?}"))
    }

    pub fn object(&self, name: &str) -> Result<Object> {
        self.build_object(self.object_spec(name)?).with_context(|| format!("object {name:?}"))
    }

    fn points(ring: &Ring, points: &[PointSpec]) -> Result<Vec<ComplexObj>> {
        points
            .iter()
            .enumerate()
            .map(|(x, p)| {
                let m = build_module(&p.ranks)?;
                let d = build_map(ring, &m, &m, 1, &p.differential).with_context(|| format!("differential at point {x}"))?;
                ComplexObj::new(d).map_err(|e| anyhow!("point {x}: {e}"))
            })
            .collect()
    }

    fn build_object(&self, spec: &ObjectSpec) -> Result<Object> {
        match spec {
            ObjectSpec::Twisted { ranks, components } => {
                let cover = self.cover()?;
                let names = cover.names().to_vec();
                for key in ranks.keys() {
                    if !names.contains(key) {
                        bail!("ranks given for unknown open {key:?}");
                    }
                }
                let locals = names
                    .iter()
                    .map(|n| ranks.get(n).map_or(Ok(GradedModule::zero()), build_module))
                    .collect::<Result<Vec<_>>>()?;
                let site = CechSite::new(cover.clone());
                let resolve = |tuple: &[Label]| -> Result<Cell> {
                    tuple
                        .iter()
                        .map(|l| match l {
                            Label::Name(s) => names.iter().position(|n| n == s).ok_or_else(|| anyhow!("unknown open {s:?}")),
                            Label::Index(i) if *i < names.len() => Ok(*i),
                            Label::Index(i) => bail!("open index {i} out of range"),
                        })
                        .collect()
                };
                let comps = build_components(&site, &locals, &locals, 1, components, resolve)?;
                Ok(Object::Twisted(TwPerfComplex::from_components(cover, locals, comps)?))
            }
            ObjectSpec::Equivariant { action, ring, points, components } => {
                let action = self.action(action)?;
                let ring = parse_ring(ring)?;
                if points.len() != action.carrier() {
                    bail!("{} points given for a carrier of size {}", points.len(), action.carrier());
                }
                let objects = Self::points(&ring, points)?;
                let mods: Vec<GradedModule> = objects.iter().map(|o| o.module().clone()).collect();
                let site = ActionSite { action: action.clone(), ring: ring.clone() };
                let comps = build_components(&site, &mods, &mods, 1, components, resolve_indices)?;
                if comps.iter().any(|(c, _)| c.len() == 1) {
                    bail!("level-0 data belongs in the point differentials");
                }
                Ok(Object::Equivariant(EquivariantComplex::from_components(action, &ring, objects, comps)?))
            }
            ObjectSpec::Simplex { ring, points, components } => {
                let ring = parse_ring(ring)?;
                if points.is_empty() {
                    bail!("a simplex object needs at least one point");
                }
                let objects = Self::points(&ring, points)?;
                let mods: Vec<GradedModule> = objects.iter().map(|o| o.module().clone()).collect();
                let site = NondecreasingSite { n: points.len() - 1, ring: ring.clone() };
                let comps = build_components(&site, &mods, &mods, 1, components, resolve_indices)?;
                if comps.iter().any(|(c, _)| c.len() == 1) {
                    bail!("level-0 data belongs in the point differentials");
                }
                Ok(Object::Simplex(SimplexObj::from_components(&ring, objects, comps)?))
            }
        }
    }

    /// Source, target and the morphism cochain.
    pub fn morphism(&self, name: &str) -> Result<(Object, Object, Cochain)> {
        let spec = self.morphisms.get(name).ok_or_else(|| anyhow!("unknown morphism {name:?}"))?;
        let src = self.object(&spec.from)?;
        let tgt = self.object(&spec.to)?;
        let theta = match (&src, &tgt) {
            (Object::Twisted(s), Object::Twisted(t)) => {
                let names = s.cover().names().to_vec();
                let resolve = |tuple: &[Label]| -> Result<Cell> {
                    tuple
                        .iter()
                        .map(|l| match l {
                            Label::Name(n) => names.iter().position(|x| x == n).ok_or_else(|| anyhow!("unknown open {n:?}")),
                            Label::Index(i) => Ok(*i),
                        })
                        .collect()
                };
                cochain_from(s.site(), s.locals(), t.locals(), spec, resolve)?
            }
            (Object::Equivariant(s), Object::Equivariant(t)) => cochain_from(s.site(), s.family(), t.family(), spec, resolve_indices)?,
            (Object::Simplex(s), Object::Simplex(t)) => cochain_from(s.site(), s.family(), t.family(), spec, resolve_indices)?,
            _ => bail!("morphism {name:?} joins objects of different kinds"),
        };
        Ok((src, tgt, theta))
    }
}

fn cochain_from<S: CellSite + ?Sized>(
    site: &S,
    source: &twk_core::cochain::Family,
    target: &twk_core::cochain::Family,
    spec: &MorphismSpec,
    resolve: impl Fn(&[Label]) -> Result<Cell>,
) -> Result<Cochain> {
    let comps = build_components(site, source, target, spec.degree, &spec.components, resolve)?;
    let mut c = Cochain::zero(spec.degree, source, target);
    for (cell, m) in comps {
        c.set(site, &cell, m)?;
    }
    Ok(c)
}

fn component_specs(c: &Cochain, label: impl Fn(usize) -> Label) -> Vec<ComponentSpec> {
    c.components()
        .filter(|(_, m)| !m.is_zero())
        .map(|(cell, m)| {
            let k = cell.len() as i32 - 1;
            ComponentSpec {
                tuple: cell.iter().map(|i| label(*i)).collect(),
                bidegree: [k, c.degree() - k],
                blocks: block_specs(m),
            }
        })
        .collect()
}

fn ranks_of(m: &GradedModule) -> BTreeMap<String, usize> {
    m.degrees().filter(|(_, r)| *r > 0).map(|(d, r)| (d.to_string(), r)).collect()
}

/// The cover section describing `cover`.
pub fn cover_spec(cover: &RingedCover) -> CoverSpec {
    let names = cover.names();
    let named = |s: &[usize]| s.iter().map(|i| names[*i].clone()).collect::<Vec<_>>();
    let sets: Vec<Vec<usize>> = cover.nerve().cloned().collect();
    let mut rings = Vec::new();
    let mut restrictions = Vec::new();
    for s in &sets {
        let ring = cover.ring_of_set(s).expect("nerve set has a ring");
        rings.push(RingEntry { set: named(s), ring: ring.to_string() });
        if s.len() < 2 {
            continue;
        }
        for drop in 0..s.len() {
            let mut f = s.clone();
            f.remove(drop);
            let h = cover.restriction(&f, s);
            if h.is_identity() {
                continue;
            }
            let images = h.images().iter().map(|e| format_scalar(h.target(), e)).collect();
            restrictions.push(RestrictionEntry { from: named(&f), to: named(s), images });
        }
    }
    CoverSpec { opens: names.to_vec(), nerve: sets.iter().map(|s| named(s)).collect(), ring: None, rings, restrictions }
}

pub fn twisted_spec(t: &TwPerfComplex) -> ObjectSpec {
    let names = t.cover().names().to_vec();
    let ranks = names.iter().cloned().zip(t.locals().iter().map(ranks_of)).collect();
    ObjectSpec::Twisted { ranks, components: component_specs(t.a(), |i| Label::Name(names[i].clone())) }
}

fn point_specs(objects: &[ComplexObj]) -> Vec<PointSpec> {
    objects.iter().map(|o| PointSpec { ranks: ranks_of(o.module()), differential: block_specs(o.diff()) }).collect()
}

pub fn equivariant_spec(e: &EquivariantComplex, action_name: &str) -> ObjectSpec {
    ObjectSpec::Equivariant {
        action: action_name.into(),
        ring: e.site().ring.to_string(),
        points: point_specs(e.objects()),
        components: component_specs(e.phi(), Label::Index),
    }
}

pub fn action_spec(a: &GroupAction) -> ActionSpec {
    ActionSpec { group: a.group().table().to_vec(), act: a.table().to_vec() }
}

pub fn simplex_spec(s: &SimplexObj) -> ObjectSpec {
    ObjectSpec::Simplex {
        ring: s.ring().to_string(),
        points: point_specs(s.objects()),
        components: component_specs(s.phi(), Label::Index),
    }
}

pub fn morphism_spec(from: &str, to: &str, theta: &Cochain, label: impl Fn(usize) -> Label) -> MorphismSpec {
    MorphismSpec { from: from.into(), to: to.into(), degree: theta.degree(), components: component_specs(theta, label) }
}

/// A manifest holding one twisted object and its cover.
pub fn twisted_manifest(name: &str, t: &TwPerfComplex) -> Manifest {
    Manifest {
        cover: Some(cover_spec(t.cover())),
        objects: [(name.to_string(), twisted_spec(t))].into(),
        ..Manifest::default()
    }
}

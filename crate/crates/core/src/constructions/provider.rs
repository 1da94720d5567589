//! Resolution of ingredient designs: registry first, then generators.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    affine_space, prime_power, projective_plane, steiner_triple_system, transversal_design,
};
use crate::designs::{
    pbd_as_gdd, verify_gdd, verify_pbd, Blocks, GroupDesign, GroupType, PBDesign, Point,
};
use crate::pipeline::{Registry, Stored};

use super::points::delete_point;

/// A request for an ingredient design.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Request {
    /// A PBD(v, K).
    Pbd { v: usize, sizes: BTreeSet<usize> },
    /// A K-GDD of the given type.
    Gdd {
        sizes: BTreeSet<usize>,
        group_type: GroupType,
    },
}

pub(crate) fn fmt_sizes(sizes: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = sizes.iter().map(usize::to_string).collect();
    parts.join(",")
}

impl fmt::Display for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Request::Pbd { v, sizes } => write!(f, "PBD({v},{{{}}})", fmt_sizes(sizes)),
            Request::Gdd { sizes, group_type } => {
                write!(f, "{{{}}}-GDD of type {group_type}", fmt_sizes(sizes))
            }
        }
    }
}

impl Request {
    pub fn pbd(v: usize, sizes: &BTreeSet<usize>) -> Self {
        Request::Pbd {
            v,
            sizes: sizes.clone(),
        }
    }

    pub fn gdd(sizes: &BTreeSet<usize>, group_type: GroupType) -> Self {
        Request::Gdd {
            sizes: sizes.clone(),
            group_type,
        }
    }

    /// Why `design` does not satisfy this request, if it does not.
    pub fn mismatch(&self, design: &Stored) -> Option<String> {
        match (self, design) {
            (Request::Pbd { v, sizes }, Stored::Pbd(d)) => {
                if d.v() != *v {
                    return Some(format!("design has {} points, request needs {v}", d.v()));
                }
                if !d.block_sizes().is_subset(sizes) {
                    return Some("block sizes outside K".into());
                }
                let r = verify_pbd(d);
                (!r.valid).then(|| r.summary())
            }
            (Request::Gdd { sizes, group_type }, Stored::Gdd(g)) => {
                if &g.group_type() != group_type {
                    return Some(format!("design has type {}, request needs {group_type}", g.group_type()));
                }
                if !g.block_sizes().is_subset(sizes) {
                    return Some("block sizes outside K".into());
                }
                let r = verify_gdd(g);
                (!r.valid).then(|| r.summary())
            }
            _ => Some("design kind does not match the request".into()),
        }
    }
}

/// Which built-in generator families the provider may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generators {
    /// Single blocks, one-point designs, one-group GDDs.
    pub trivial: bool,
    pub sts: bool,
    pub projective: bool,
    pub affine: bool,
    pub transversal: bool,
    /// PBD(v, {2}) as all pairs.
    pub complete: bool,
    /// k-GDDs of type (k-1)^r from a PBD(r(k-1)+1, {k}) minus a point.
    pub point_deletion: bool,
}

impl Generators {
    pub const NAMES: [&'static str; 7] = ["trivial", "sts", "pg", "ag", "td", "complete", "delete"];

    pub fn all() -> Self {
        Generators {
            trivial: true,
            sts: true,
            projective: true,
            affine: true,
            transversal: true,
            complete: true,
            point_deletion: true,
        }
    }

    pub fn none() -> Self {
        Generators {
            trivial: false,
            sts: false,
            projective: false,
            affine: false,
            transversal: false,
            complete: false,
            point_deletion: false,
        }
    }

    fn flag(&mut self, name: &str) -> Option<&mut bool> {
        Some(match name {
            "trivial" => &mut self.trivial,
            "sts" => &mut self.sts,
            "pg" => &mut self.projective,
            "ag" => &mut self.affine,
            "td" => &mut self.transversal,
            "complete" => &mut self.complete,
            "delete" => &mut self.point_deletion,
            _ => return None,
        })
    }
}

impl FromStr for Generators {
    type Err = String;

    /// `all`, `none`, or a comma list of family names.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => return Ok(Generators::all()),
            "none" | "" => return Ok(Generators::none()),
            _ => {}
        }
        let mut g = Generators::none();
        for name in s.split(',').map(str::trim) {
            *g.flag(name).ok_or_else(|| {
                format!("unknown generator '{name}' (expected one of {})", Generators::NAMES.join(", "))
            })? = true;
        }
        Ok(g)
    }
}

/// A resolved ingredient and where it came from.
#[derive(Debug, Clone)]
pub struct Resolved<T> {
    pub design: Arc<T>,
    pub source: String,
}

/// Resolves ingredient requests against a registry and the enabled
/// generators, memoizing every answer (including misses).
pub struct Provider {
    registry: Registry,
    generators: Generators,
    pbds: HashMap<(usize, BTreeSet<usize>), Option<Resolved<PBDesign>>>,
    gdds: HashMap<(BTreeSet<usize>, GroupType), Option<Resolved<GroupDesign>>>,
}

impl Provider {
    pub fn new(registry: Registry, generators: Generators) -> Self {
        Provider {
            registry,
            generators,
            pbds: HashMap::new(),
            gdds: HashMap::new(),
        }
    }

    /// All generators, empty registry.
    pub fn generators_only() -> Self {
        Provider::new(Registry::new(), Generators::all())
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn generators(&self) -> Generators {
        self.generators
    }

    pub fn resolve(&mut self, request: &Request) -> bool {
        match request {
            Request::Pbd { v, sizes } => self.pbd(*v, sizes).is_some(),
            Request::Gdd { sizes, group_type } => self.gdd(sizes, group_type).is_some(),
        }
    }

    /// Where a request would be answered from, if anywhere.
    pub fn source_of(&mut self, request: &Request) -> Option<String> {
        match request {
            Request::Pbd { v, sizes } => self.pbd(*v, sizes).map(|r| r.source),
            Request::Gdd { sizes, group_type } => self.gdd(sizes, group_type).map(|r| r.source),
        }
    }

    pub fn pbd(&mut self, v: usize, sizes: &BTreeSet<usize>) -> Option<Resolved<PBDesign>> {
        let key = (v, sizes.clone());
        if let Some(hit) = self.pbds.get(&key) {
            return hit.clone();
        }
        let found = self.lookup_pbd(v, sizes);
        self.pbds.insert(key, found.clone());
        found
    }

    pub fn gdd(&mut self, sizes: &BTreeSet<usize>, group_type: &GroupType) -> Option<Resolved<GroupDesign>> {
        let key = (sizes.clone(), group_type.clone());
        if let Some(hit) = self.gdds.get(&key) {
            return hit.clone();
        }
        let found = self.lookup_gdd(sizes, group_type);
        self.gdds.insert(key, found.clone());
        found
    }

    fn lookup_pbd(&mut self, v: usize, sizes: &BTreeSet<usize>) -> Option<Resolved<PBDesign>> {
        if let Some(Stored::Pbd(d)) = self.registry.get(&Request::pbd(v, sizes)) {
            return Some(Resolved {
                design: d.clone(),
                source: "registry".into(),
            });
        }
        let g = self.generators;
        let made = |design: PBDesign, source: &str| {
            Some(Resolved {
                design: Arc::new(design),
                source: source.to_string(),
            })
        };
        if g.trivial && (sizes.contains(&v) || v == 1) {
            let d = if v == 1 {
                PBDesign::from_blocks(1, Vec::<Vec<Point>>::new()).unwrap()
            } else {
                PBDesign::single_block(v)
            };
            return made(d, "single block");
        }
        if g.sts && sizes.contains(&3) {
            if let Ok(d) = steiner_triple_system(v) {
                return made(d, "steiner triple system");
            }
        }
        if g.projective {
            let q = (1..=v).take_while(|q| q * q + q < v).last();
            if let Some(q) = q.filter(|q| q * q + q + 1 == v && sizes.contains(&(q + 1))) {
                if let Ok(d) = projective_plane(q as u64) {
                    return made(d, "projective plane");
                }
            }
        }
        if g.affine {
            for &q in sizes.iter().filter(|&&q| q >= 2) {
                let mut power = q * q;
                let mut dim = 2;
                while power < v {
                    power *= q;
                    dim += 1;
                }
                if power == v && prime_power(q as u64).is_some() {
                    if let Ok(d) = affine_space(q as u64, dim) {
                        return made(d, "affine space");
                    }
                }
            }
        }
        if g.complete && sizes.contains(&2) && v >= 2 {
            let pairs = (0..v as Point).flat_map(|a| (a + 1..v as Point).map(move |b| [a, b]));
            let d = PBDesign::new(v, Blocks::from_lists(pairs), None).unwrap();
            return made(d, "complete graph");
        }
        None
    }

    fn lookup_gdd(&mut self, sizes: &BTreeSet<usize>, group_type: &GroupType) -> Option<Resolved<GroupDesign>> {
        if let Some(Stored::Gdd(d)) = self.registry.get(&Request::gdd(sizes, group_type.clone())) {
            return Some(Resolved {
                design: d.clone(),
                source: "registry".into(),
            });
        }
        let g = self.generators;
        let made = |design: GroupDesign, source: &str| {
            Some(Resolved {
                design: Arc::new(design),
                source: source.to_string(),
            })
        };
        let t = group_type.sizes();
        let uniform = t.first().filter(|&&s| t.iter().all(|&x| x == s)).copied();
        let u = t.len();

        if g.trivial && u == 1 {
            let d = GroupDesign::new(t[0], vec![(0..t[0] as Point).collect()], Blocks::new(), None).unwrap();
            return made(d, "single group");
        }
        if uniform == Some(1) {
            // type 1^u is a PBD(u, K)
            let r = self.pbd(u, sizes)?;
            return made(pbd_as_gdd(&r.design), &r.source);
        }
        if let Some(n) = uniform {
            if g.transversal && sizes.contains(&u) {
                if let Ok(d) = transversal_design(u, n) {
                    return made(d, "transversal design");
                }
            }
            if g.point_deletion && sizes.contains(&(n + 1)) {
                let parent = BTreeSet::from([n + 1]);
                if let Some(r) = self.pbd(n * u + 1, &parent) {
                    if let Ok(d) = delete_point(&r.design, 0) {
                        if &d.group_type() == group_type {
                            return made(d, &format!("{} minus a point", r.source));
                        }
                    }
                }
            }
        }
        if g.complete && sizes.contains(&2) && u >= 2 {
            // every cross pair as a block
            let mut blocks = Blocks::new();
            let mut groups = Vec::with_capacity(u);
            let mut start = 0 as Point;
            for &s in t {
                groups.push((start..start + s as Point).collect::<Vec<_>>());
                start += s as Point;
            }
            for (i, a) in groups.iter().enumerate() {
                for b in &groups[i + 1..] {
                    for &x in a {
                        for &y in b {
                            blocks.push(&[x, y]);
                        }
                    }
                }
            }
            let d = GroupDesign::new(start as usize, groups, blocks, Some(BTreeSet::from([2]))).unwrap();
            return made(d, "complete multipartite graph");
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &[usize]) -> BTreeSet<usize> {
        s.iter().copied().collect()
    }

    #[test]
    fn generator_lookups() {
        let mut p = Provider::generators_only();
        assert_eq!(p.pbd(13, &k(&[4])).unwrap().source, "projective plane");
        assert_eq!(p.pbd(27, &k(&[3])).unwrap().source, "steiner triple system");
        assert_eq!(p.pbd(25, &k(&[5])).unwrap().source, "affine space");
        assert_eq!(p.pbd(5, &k(&[5])).unwrap().source, "single block");
        assert_eq!(p.pbd(6, &k(&[2])).unwrap().design.blocks().len(), 15);
        assert!(p.pbd(6, &k(&[3])).is_none());

        let td = p.gdd(&k(&[13]), &GroupType::uniform(13, 13)).unwrap();
        assert_eq!(td.source, "transversal design");
        let t = p.gdd(&k(&[3]), &GroupType::uniform(2, 4)).unwrap();
        assert_eq!(t.design.v(), 8);
        assert!(verify_gdd(&t.design).valid);
        assert!(p.gdd(&k(&[3]), &GroupType::uniform(2, 5)).is_none());
        assert_eq!(p.gdd(&k(&[4]), &GroupType::uniform(1, 4)).unwrap().source, "single block");
    }

    #[test]
    fn disabled_generators_miss() {
        let mut p = Provider::new(Registry::new(), Generators::none());
        assert!(p.pbd(13, &k(&[4])).is_none());
        assert!(!p.resolve(&Request::gdd(&k(&[3]), GroupType::uniform(2, 4))));
    }

    #[test]
    fn registry_takes_precedence() {
        let mut reg = Registry::new();
        let pg = projective_plane(3).unwrap();
        reg.put(Request::pbd(13, &k(&[4])), Stored::Pbd(Arc::new(pg))).unwrap();
        let mut p = Provider::new(reg, Generators::all());
        assert_eq!(p.source_of(&Request::pbd(13, &k(&[4]))).as_deref(), Some("registry"));
    }

    #[test]
    fn parse_generator_lists() {
        assert_eq!("all".parse::<Generators>().unwrap(), Generators::all());
        let g: Generators = "sts,td".parse().unwrap();
        assert!(g.sts && g.transversal && !g.projective);
        assert!("sts,bogus".parse::<Generators>().is_err());
    }

    #[test]
    fn request_display() {
        assert_eq!(Request::pbd(13, &k(&[4])).to_string(), "PBD(13,{4})");
        assert_eq!(
            Request::gdd(&k(&[3]), GroupType::uniform(2, 4)).to_string(),
            "{3}-GDD of type 2^4"
        );
    }
}

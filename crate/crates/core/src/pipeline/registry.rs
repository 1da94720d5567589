use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::constructions::{fmt_sizes, Request};
use crate::designs::{GroupDesign, PBDesign};
use crate::format::DesignFile;

use super::PipelineError;

/// A stored ingredient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stored {
    Pbd(Arc<PBDesign>),
    Gdd(Arc<GroupDesign>),
}

impl Stored {
    /// The request this design answers, using its declared sizes.
    pub fn natural_request(&self) -> Request {
        match self {
            Stored::Pbd(d) => Request::pbd(d.v(), &d.sizes()),
            Stored::Gdd(g) => Request::gdd(&g.sizes(), g.group_type()),
        }
    }

    pub fn to_file(&self) -> DesignFile {
        match self {
            Stored::Pbd(d) => DesignFile::Pbd((**d).clone()),
            Stored::Gdd(g) => DesignFile::Gdd((**g).clone()),
        }
    }
}

impl From<DesignFile> for Stored {
    fn from(f: DesignFile) -> Self {
        match f {
            DesignFile::Pbd(d) => Stored::Pbd(Arc::new(d)),
            DesignFile::Gdd(g) => Stored::Gdd(Arc::new(g)),
        }
    }
}

/// Verified ingredient designs keyed by exact request.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<Request, Stored>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stores `design` under `request` after checking it answers it.
    pub fn put(&mut self, request: Request, design: Stored) -> Result<(), PipelineError> {
        if let Some(reason) = request.mismatch(&design) {
            return Err(PipelineError::VerificationFailed { request, reason });
        }
        self.entries.insert(request, design);
        Ok(())
    }

    /// Stores a design under its natural request.
    pub fn add(&mut self, design: Stored) -> Result<Request, PipelineError> {
        let request = design.natural_request();
        self.put(request.clone(), design)?;
        Ok(request)
    }

    pub fn get(&self, request: &Request) -> Option<&Stored> {
        self.entries.get(request)
    }

    pub fn requests(&self) -> impl Iterator<Item = &Request> {
        self.entries.keys()
    }

    /// Loads every `*.txt` file in `dir`; keys come from the parsed headers.
    pub fn load_dir(dir: &Path) -> Result<Self, PipelineError> {
        let mut reg = Registry::new();
        let io = |e: std::io::Error| PipelineError::Io(format!("{}: {e}", dir.display()));
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        paths.sort();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
            let file = DesignFile::parse(&text)
                .map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
            reg.add(file.into())?;
        }
        Ok(reg)
    }

    /// Writes `design` into `dir` under its canonical name and returns the path.
    pub fn store(dir: &Path, design: &Stored) -> Result<PathBuf, PipelineError> {
        let mut scratch = Registry::new();
        let request = scratch.add(design.clone())?;
        fs::create_dir_all(dir).map_err(|e| PipelineError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(file_name(&request));
        fs::write(&path, design.to_file().to_text())
            .map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

/// `pbd_v13_4.txt`, `gdd_3_2^4.txt`, `gdd_3,4_13^168_5^1.txt`.
pub fn file_name(request: &Request) -> String {
    match request {
        Request::Pbd { v, sizes } => format!("pbd_v{v}_{}.txt", fmt_sizes(sizes)),
        Request::Gdd { sizes, group_type } => {
            format!("gdd_{}_{}.txt", fmt_sizes(sizes), group_type.to_string().replace(' ', "_"))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::algebra::{projective_plane, steiner_triple_system};
    use crate::constructions::delete_point;
    use crate::designs::GroupType;

    #[test]
    fn put_and_get() {
        let mut reg = Registry::new();
        let pg = Arc::new(projective_plane(3).unwrap());
        let req = Request::pbd(13, &BTreeSet::from([4]));
        reg.put(req.clone(), Stored::Pbd(pg.clone())).unwrap();
        assert_eq!(reg.get(&req), Some(&Stored::Pbd(pg)));
        assert_eq!(reg.get(&Request::pbd(101, &BTreeSet::from([6]))), None);
    }

    #[test]
    fn put_gdd_from_deleted_sts() {
        let mut reg = Registry::new();
        let g = delete_point(&steiner_triple_system(9).unwrap(), 0).unwrap();
        let req = Request::gdd(&BTreeSet::from([3]), GroupType::uniform(2, 4));
        reg.put(req.clone(), Stored::Gdd(Arc::new(g))).unwrap();
        assert!(reg.get(&req).is_some());
    }

    #[test]
    fn put_rejects_wrong_designs() {
        let mut reg = Registry::new();
        let pg = Arc::new(projective_plane(3).unwrap());
        let err = reg.put(Request::pbd(13, &BTreeSet::from([3])), Stored::Pbd(pg.clone()));
        assert!(matches!(err, Err(PipelineError::VerificationFailed { .. })));
        let broken = PBDesign::from_blocks(4, [[0u32, 1, 2]]).unwrap();
        let err = reg.put(Request::pbd(4, &BTreeSet::from([3])), Stored::Pbd(Arc::new(broken)));
        assert!(matches!(err, Err(PipelineError::VerificationFailed { .. })));
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let pg = Stored::Pbd(Arc::new(projective_plane(3).unwrap()));
        let path = Registry::store(dir.path(), &pg).unwrap();
        assert_eq!(path.file_name().unwrap(), "pbd_v13_4.txt");
        let g = delete_point(&steiner_triple_system(9).unwrap(), 0).unwrap();
        let path = Registry::store(dir.path(), &Stored::Gdd(Arc::new(g))).unwrap();
        assert_eq!(path.file_name().unwrap(), "gdd_3_2^4.txt");
        // lookup ignores file names
        fs::rename(&path, dir.path().join("anything.txt")).unwrap();
        let reg = Registry::load_dir(dir.path()).unwrap();
        assert_eq!(reg.len(), 2);
        assert!(reg
            .get(&Request::gdd(&BTreeSet::from([3]), GroupType::uniform(2, 4)))
            .is_some());
    }
}

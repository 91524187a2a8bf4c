//! Colored tables, built on demand and optionally cached as CLRT files.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use qdel_core::codec::provider_lengths;
use qdel_core::coloring::ColoredTable;
use qdel_core::params::ValidParams;
use qdel_core::sketch::{SketchProviderId, TwoDelProvider};

use crate::format::{FormatError, TableFile};

#[derive(Debug, Clone, Default)]
pub struct TableCache {
    dir: Option<PathBuf>,
}

impl TableCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        TableCache { dir }
    }

    pub fn path(dir: &Path, w: usize) -> PathBuf {
        dir.join(format!("clrt-w{w:02}.bin"))
    }

    fn load(path: &Path, w: usize) -> Option<ColoredTable> {
        let bytes = fs::read(path).ok()?;
        let f = TableFile::from_bytes(&bytes).ok()?;
        if f.w != w {
            return None;
        }
        ColoredTable::from_parts(f.w, f.count, f.colors).ok()
    }

    /// Load the table for length w from the cache, or build and store it.
    /// A cached file that fails to parse is rebuilt.
    pub fn table(&self, w: usize, w_max: usize) -> anyhow::Result<Arc<ColoredTable>> {
        if let Some(dir) = &self.dir {
            let path = Self::path(dir, w);
            if let Some(t) = Self::load(&path, w) {
                return Ok(Arc::new(t));
            }
            let t = ColoredTable::build(w, w_max)?;
            fs::create_dir_all(dir)?;
            let file = TableFile { w, count: t.color_count(), colors: t.colors().to_vec() };
            fs::write(&path, file.to_bytes())?;
            return Ok(Arc::new(t));
        }
        Ok(Arc::new(ColoredTable::build(w, w_max)?))
    }

    /// The provider a parameter set needs.
    pub fn provider(&self, vp: &ValidParams) -> anyhow::Result<TwoDelProvider> {
        let p = &vp.params;
        if p.provider == SketchProviderId::Verbatim {
            return Ok(TwoDelProvider::verbatim());
        }
        let tables = provider_lengths(vp)
            .into_iter()
            .map(|w| self.table(w, p.w_max))
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(TwoDelProvider::colored(p.w_max, tables))
    }
}

pub fn read_table(path: &Path) -> Result<ColoredTable, FormatError> {
    let f = TableFile::from_bytes(&fs::read(path)?)?;
    ColoredTable::from_parts(f.w, f.count, f.colors).map_err(|_| FormatError::Payload)
}

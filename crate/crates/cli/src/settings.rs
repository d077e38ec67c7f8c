//! Run settings: config file values overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use gaussqec::circuit::EngineKind;
use gaussqec::lattice::{Dimension, Matter, SchemeId, Variant};
use serde::Deserialize;

/// Every key a config file may set. Top-level keys apply to all
/// subcommands; a `[subcommand]` table overrides them for that subcommand.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub dim: Option<u8>,
    pub matter: Option<Matter>,
    pub variant: Option<Variant>,
    pub n: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub engine: Option<EngineChoice>,
    pub p: Option<Vec<f64>>,
    pub shots: Option<u64>,
    pub circuits: Option<u64>,
    pub round: Option<String>,
    pub out: Option<PathBuf>,
    pub diff_out: Option<PathBuf>,
    pub accept_diffs: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Auto,
    Tableau,
    Dense,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Settings {
    /// Reads `path`, merging the `[section]` table over the top level.
    pub fn load(path: &Path, section: &str) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut table: toml::Table = text.parse().with_context(|| format!("parsing {}", path.display()))?;
        let sections = ["count", "verify", "sample", "emit", "tables", "crosscheck"];
        let own = match table.remove(section) {
            Some(toml::Value::Table(t)) => Some(t),
            Some(_) => bail!("[{section}] must be a table"),
            None => None,
        };
        table.retain(|k, _| !sections.contains(&k));
        if let Some(own) = own {
            table.extend(own);
        }
        toml::Value::Table(table).try_into().with_context(|| format!("invalid key in {}", path.display()))
    }

    /// Fields set in `flags` win.
    pub fn overlay(&mut self, flags: &Settings) {
        overlay!(self, flags, dim, matter, variant, n, nx, ny, seed, workers, engine, p, shots, circuits, round, out, diff_out, accept_diffs);
    }

    pub fn scheme(&self) -> anyhow::Result<(SchemeId, Vec<usize>)> {
        let dimension = match self.dim {
            Some(1) => Dimension::One,
            Some(2) => Dimension::Two,
            Some(d) => bail!("dim must be 1 or 2, got {d}"),
            None => bail!("missing dim"),
        };
        let matter = self.matter.context("missing matter")?;
        let variant = self.variant.unwrap_or(match dimension {
            Dimension::One => Variant::Doubled,
            Dimension::Two => Variant::FullAncilla,
        });
        let scheme = SchemeId::new(dimension, matter, variant);
        scheme.validate()?;
        let dims = match dimension {
            Dimension::One => vec![self.n.context("missing n")?],
            Dimension::Two => vec![self.nx.context("missing nx")?, self.ny.context("missing ny")?],
        };
        if dims.contains(&0) {
            bail!("lattice dimensions must be positive");
        }
        Ok((scheme, dims))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn engine(&self) -> Option<EngineKind> {
        match self.engine.unwrap_or(EngineChoice::Auto) {
            EngineChoice::Auto => None,
            EngineChoice::Tableau => Some(EngineKind::Tableau),
            EngineChoice::Dense => Some(EngineKind::Dense),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_override_top_level() {
        let dir = std::env::temp_dir().join(format!("gaussqec-settings-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "dim = 1\nmatter = \"dynamical\"\nn = 2\nseed = 5\n[sample]\nseed = 9\np = [0.001]\n").unwrap();
        let s = Settings::load(&path, "sample").unwrap();
        assert_eq!((s.seed, s.n, s.p.clone()), (Some(9), Some(2), Some(vec![0.001])));
        let c = Settings::load(&path, "count").unwrap();
        assert_eq!(c.seed, Some(5));
        let (scheme, dims) = c.scheme().unwrap();
        assert_eq!((scheme.to_string(), dims), ("1d/dynamical/doubled".to_string(), vec![2]));

        let mut c = c;
        c.overlay(&Settings { n: Some(4), ..Default::default() });
        assert_eq!(c.n, Some(4));

        std::fs::write(&path, "dims = 3\n").unwrap();
        assert!(Settings::load(&path, "count").is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn scheme_validation() {
        let s = Settings { dim: Some(2), matter: Some(Matter::Pure), nx: Some(1), ny: Some(1), ..Default::default() };
        assert_eq!(s.scheme().unwrap().0.variant, Variant::FullAncilla);
        let bad = Settings { variant: Some(Variant::Doubled), ..s.clone() };
        assert!(bad.scheme().is_err());
        let zero = Settings { nx: Some(0), ..s };
        assert!(zero.scheme().is_err());
    }
}

//! Figure presets: model anisotropies, field window and plotted columns.

use std::fmt;
use std::str::FromStr;

use squo_core::Column;

use crate::config::RunConfig;
use crate::error::CliError;

pub const DEFAULT_SITES: usize = 12;
pub const DEFAULT_STEPS: usize = 121;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
        }
    }

    /// `(delta_y, delta_z)`.
    pub fn anisotropy(self) -> (f64, f64) {
        match self {
            Preset::Fig2a => (1.0, 0.0),
            Preset::Fig2b => (1.0, 1.0),
            Preset::Fig1a | Preset::Fig3a | Preset::Fig4a => (0.4, 0.0),
            Preset::Fig1b | Preset::Fig3b | Preset::Fig4b => (0.25, 1.0),
        }
    }

    pub fn model_label(self) -> &'static str {
        match self.anisotropy() {
            (0.4, _) => "XY",
            (0.25, _) => "XYZ",
            (_, 0.0) => "XX",
            _ => "Heisenberg",
        }
    }

    pub fn field_range(self) -> (f64, f64) {
        match self {
            Preset::Fig1a | Preset::Fig3a | Preset::Fig4a => (0.0, 1.2),
            Preset::Fig2a => (0.0, 1.5),
            _ => (0.0, 2.5),
        }
    }

    pub fn columns(self) -> &'static [Column] {
        match self {
            Preset::Fig1a | Preset::Fig1b | Preset::Fig2a | Preset::Fig2b => &[Column::Exe, Column::VnEntropy],
            Preset::Fig3a | Preset::Fig3b => &[Column::Exe, Column::DePerp1, Column::DePerp2],
            Preset::Fig4a | Preset::Fig4b => &[Column::Eer],
        }
    }

    /// Defaults for this preset, before any file or flag is applied.
    pub fn base_config(self) -> RunConfig {
        let mut cfg = RunConfig::default();
        let (dy, dz) = self.anisotropy();
        let (lo, hi) = self.field_range();
        cfg.model.n_sites = DEFAULT_SITES;
        cfg.model.delta_y = dy;
        cfg.model.delta_z = dz;
        cfg.model.h = lo;
        cfg.scan.h_min = lo;
        cfg.scan.h_max = hi;
        cfg.scan.steps = DEFAULT_STEPS;
        cfg.output.path = Some("figures".into());
        cfg
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                CliError::validation("preset", format!("unknown preset `{s}`, expected one of {known:?}"))
            })
    }
}

pub fn column_name(column: Column) -> &'static str {
    match column {
        Column::Energy0 => "energy0",
        Column::Gap => "gap",
        Column::MX => "m_x",
        Column::MZ => "m_z",
        Column::GXx => "g_xx",
        Column::GYy => "g_yy",
        Column::GZz => "g_zz",
        Column::Tangle => "tangle",
        Column::VnEntropy => "vn_entropy",
        Column::Exe => "exe",
        Column::DePerp1 => "de_perp1",
        Column::DePerp2 => "de_perp2",
        Column::Eer => "eer",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_print() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            assert!(p.base_config().validate().is_ok());
        }
        assert!("fig5a".parse::<Preset>().is_err());
    }

    #[test]
    fn caption_parameters() {
        assert_eq!(Preset::Fig1a.anisotropy(), (0.4, 0.0));
        assert_eq!(Preset::Fig1b.anisotropy(), (0.25, 1.0));
        assert_eq!(Preset::Fig2b.model_label(), "Heisenberg");
        assert_eq!(Preset::Fig2a.model_label(), "XX");
        assert_eq!(Preset::Fig3a.columns(), &[Column::Exe, Column::DePerp1, Column::DePerp2]);
        assert_eq!(Preset::Fig4b.columns(), &[Column::Eer]);
        assert_eq!(Preset::Fig1a.base_config().model.n_sites, 12);
    }
}

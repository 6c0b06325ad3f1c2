use serde::Serialize;

use super::SpectralTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellStats {
    /// `|xi| = q^j`, with `j = 0` the zero frequency.
    pub j: usize,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

pub fn shell_profile(spectrum: &SpectralTable) -> Vec<ShellStats> {
    let mags: Vec<f64> = spectrum.values().to_complex().iter().map(|z| z.norm()).collect();
    spectrum
        .shells()
        .iter()
        .enumerate()
        .map(|(j, range)| {
            let shell = &mags[range.clone()];
            let max = shell.iter().copied().fold(0.0, f64::max);
            let mean = shell.iter().sum::<f64>() / shell.len() as f64;
            ShellStats {
                j,
                max,
                mean,
                count: shell.len(),
            }
        })
        .collect()
}

/// Fourier decay summary of a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    /// `-2 *` the least-squares slope of `log_q(shell max)` against `j`, over
    /// shells `j >= 1` with nonzero maximum. `None` when fewer than two such
    /// shells exist.
    pub s_hat: Option<f64>,
    pub s_query: Option<f64>,
    /// `max_{xi != 0} |F(xi)| |xi|^{s/2}` for the queried `s`; 0 when every
    /// nonzero frequency vanishes.
    pub c_hat: Option<f64>,
    pub shell_max: Vec<f64>,
    pub usable_shells: usize,
}

impl DecayFit {
    pub fn s_hat(&self) -> Result<f64> {
        self.s_hat.ok_or(Error::FitUndefined {
            usable_shells: self.usable_shells,
        })
    }
}

pub fn decay_fit(spectrum: &SpectralTable, s_query: Option<f64>) -> DecayFit {
    let q = spectrum.modulus().get() as f64;
    let profile = shell_profile(spectrum);
    let shell_max: Vec<f64> = profile.iter().map(|s| s.max).collect();

    let points: Vec<(f64, f64)> = profile
        .iter()
        .skip(1)
        .filter(|s| s.max > 0.0)
        .map(|s| (s.j as f64, s.max.ln() / q.ln()))
        .collect();
    let usable_shells = points.len();
    let s_hat = if usable_shells >= 2 {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(-2.0 * sxy / sxx)
    } else {
        None
    };

    // Within a shell the weight |xi|^{s/2} is constant, so the shell max decides.
    let c_hat = s_query.map(|s| {
        profile
            .iter()
            .skip(1)
            .map(|sh| sh.max * q.powf(sh.j as f64 * s / 2.0))
            .fold(0.0, f64::max)
    });

    DecayFit {
        s_hat,
        s_query,
        c_hat,
        shell_max,
        usable_shells,
    }
}

use std::io::{self, Write};

use super::{SpectralTable, Values};
use crate::arith::CycScalar;

/// Writes `xi_index,re,im,abs,shell` rows in dual encoding order.
pub fn write_spectrum_csv<W: Write>(spectrum: &SpectralTable, mut out: W) -> io::Result<()> {
    writeln!(out, "xi_index,re,im,abs,shell")?;
    for (m, z) in spectrum.values().to_complex().iter().enumerate() {
        writeln!(out, "{},{},{},{},{}", m, z.re, z.im, z.norm(), spectrum.shell_of(m))?;
    }
    Ok(())
}

/// One exact scalar per line as `c_0/r_0,...,c_{q-2}/r_{q-2}`. Float tables
/// have no sidecar.
pub fn write_exact_sidecar<W: Write>(spectrum: &SpectralTable, mut out: W) -> io::Result<bool> {
    match spectrum.values() {
        Values::Exact(v) => {
            for c in v {
                writeln!(out, "{}", format_exact_line(c))?;
            }
            Ok(true)
        }
        Values::Float(_) => Ok(false),
    }
}

pub fn format_exact_line(c: &CycScalar) -> String {
    c.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Modulus;

    #[test]
    fn csv_layout() {
        let q = Modulus::new(3).unwrap();
        let v = vec![CycScalar::one(q), CycScalar::zeta_pow(q, 1), CycScalar::zero(q)];
        let spec = SpectralTable::new(q, 1, Values::Exact(v)).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&spec, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "xi_index,re,im,abs,shell");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,0,1,0"));
        assert!(lines[3].ends_with(",1"));

        let mut side = Vec::new();
        assert!(write_exact_sidecar(&spec, &mut side).unwrap());
        assert_eq!(String::from_utf8(side).unwrap(), "1/1,0/1\n0/1,1/1\n0/1,0/1\n");
    }
}

//! The two Naegleria gruberi EST libraries, as frequency spectra.

use crate::error::Result;
use crate::sample::SampleSummary;

pub const AEROBIC_CSV: &str = include_str!("../fixtures/naegleria_aerobic.csv");
pub const ANAEROBIC_CSV: &str = include_str!("../fixtures/naegleria_anaerobic.csv");

/// Aerobic library: n = 959 ESTs, k = 473 genes.
pub fn aerobic() -> Result<SampleSummary> {
    SampleSummary::parse_spectrum_csv(AEROBIC_CSV.as_bytes(), true)
}

/// Anaerobic library: n = 969 ESTs, k = 631 genes.
pub fn anaerobic() -> Result<SampleSummary> {
    SampleSummary::parse_spectrum_csv(ANAEROBIC_CSV.as_bytes(), true)
}

/// Fixture by name (`aerobic` or `anaerobic`).
pub fn by_name(name: &str) -> Option<Result<SampleSummary>> {
    match name {
        "aerobic" => Some(aerobic()),
        "anaerobic" => Some(anaerobic()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_sizes() {
        let a = aerobic().unwrap();
        assert_eq!((a.n(), a.k(), a.m(1)), (959, 473, 346));
        let b = anaerobic().unwrap();
        assert_eq!((b.n(), b.k(), b.m(1)), (969, 631, 491));
    }
}

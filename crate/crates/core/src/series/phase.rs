use super::{ExactSeries, Result, SeriesError};

/// A series times `i^phase`, keeping the coefficient table rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedSeries {
    phase: u8,
    series: ExactSeries,
}

impl PhasedSeries {
    pub fn new(phase: u8, series: ExactSeries) -> Self {
        Self { phase: phase % 4, series }
    }

    pub fn real(series: ExactSeries) -> Self {
        Self::new(0, series)
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// The rational part, ignoring the phase.
    pub fn magnitude(&self) -> &ExactSeries {
        &self.series
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.phase + other.phase, self.series.mul(&other.series)?))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::new(4 - self.phase, self.series.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let ph = (self.phase as i64 * n).rem_euclid(4) as u8;
        Ok(Self::new(ph, self.series.pow(n)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (4 + other.phase - self.phase) % 4 {
            0 => Ok(Self::new(self.phase, self.series.add(&other.series)?)),
            2 => Ok(Self::new(self.phase, self.series.sub(&other.series)?)),
            _ => Err(SeriesError::OddPhase(other.phase)),
        }
    }

    /// Folds a real phase (`±1`) into the coefficients.
    pub fn into_series(self) -> Result<ExactSeries> {
        match self.phase {
            0 => Ok(self.series),
            2 => Ok(self.series.neg()),
            p => Err(SeriesError::OddPhase(p)),
        }
    }
}

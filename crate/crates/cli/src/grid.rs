//! Tau grid specifications:
//! `geometric:START:STOP:POINTS`, `linear:START:STOP:POINTS`, or
//! `breakpoints:START:STOP:POINTS`, the last deriving sample locations from
//! the eigenvalue breakpoints of the operator inside [START, STOP].

use std::collections::BTreeSet;

use weyl_lab::error::{Error, Result};
use weyl_lab::spectra::{ModelSpectrum, TensorOperator};
use weyl_lab::{geometric_grid, linear_grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Geometric,
    Linear,
    Breakpoints,
}

#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub kind: GridKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidInput(format!(
                "grid spec `{text}` must look like kind:START:STOP:POINTS"
            )));
        }
        let kind = match parts[0] {
            "geometric" => GridKind::Geometric,
            "linear" => GridKind::Linear,
            "breakpoints" => GridKind::Breakpoints,
            other => return Err(Error::InvalidInput(format!("unknown grid kind `{other}`"))),
        };
        let start: f64 = parts[1].parse().map_err(|_| Error::InvalidInput(format!("bad grid start `{}`", parts[1])))?;
        let stop: f64 = parts[2].parse().map_err(|_| Error::InvalidInput(format!("bad grid stop `{}`", parts[2])))?;
        let points: usize = parts[3].parse().map_err(|_| Error::InvalidInput(format!("bad grid points `{}`", parts[3])))?;
        if start >= stop || start.is_nan() || stop.is_nan() {
            return Err(Error::InvalidInput(format!("grid needs start < stop, got {start}..{stop}")));
        }
        if points < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(GridSpec { kind, start, stop, points })
    }

    /// Materialize the tau values; breakpoint grids need the operator.
    pub fn taus(&self, op: &TensorOperator, budget: u64) -> Result<Vec<f64>> {
        match self.kind {
            GridKind::Geometric => geometric_grid(self.start, self.stop, self.points),
            GridKind::Linear => linear_grid(self.start, self.stop, self.points),
            GridKind::Breakpoints => breakpoint_taus(op, self.start, self.stop, self.points, budget),
        }
    }
}

/// Distinct product eigenvalues of the operator in [start, stop], each
/// flanked one representable step below and above, thinned to `points`.
fn breakpoint_taus(op: &TensorOperator, start: f64, stop: f64, points: usize, budget: u64) -> Result<Vec<f64>> {
    let mut values: BTreeSet<u64> = BTreeSet::new();
    let factors: Vec<&ModelSpectrum> = op.factors().iter().collect();
    let mut spent: u64 = 0;
    collect_products(&factors, 1.0, stop, &mut values, &mut spent, budget)?;
    let mut taus: Vec<f64> = Vec::new();
    let breakpoints: Vec<f64> = values.iter().map(|b| f64::from_bits(*b)).filter(|v| *v >= start).collect();
    let take = (points / 2).max(1);
    let step = (breakpoints.len() as f64 / take as f64).max(1.0);
    let mut picked = Vec::new();
    let mut i = 0.0;
    while (i as usize) < breakpoints.len() && picked.len() < take {
        picked.push(breakpoints[i as usize]);
        i += step;
    }
    for b in picked {
        for t in [b.next_down(), b.next_up()] {
            if t >= start && t <= stop {
                taus.push(t);
            }
        }
    }
    taus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    taus.dedup();
    if taus.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no eigenvalue breakpoints of the operator lie in [{start}, {stop}]"
        )));
    }
    Ok(taus)
}

fn collect_products(
    factors: &[&ModelSpectrum],
    acc: f64,
    stop: f64,
    values: &mut BTreeSet<u64>,
    spent: &mut u64,
    budget: u64,
) -> Result<()> {
    let Some((f, rest)) = factors.split_first() else {
        values.insert(acc.to_bits());
        return Ok(());
    };
    for entry in f.entries() {
        let entry = entry?;
        *spent += 1;
        if *spent > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let v = acc * f.value_f64_of_base(entry.base);
        if v > stop {
            break;
        }
        collect_products(rest, v, stop, values, spent, budget)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use weyl_lab::a1_spectrum;

    #[test]
    fn parses_grid_specs() {
        let g = GridSpec::parse("geometric:1e2:1e6:40").unwrap();
        assert_eq!(g.kind, GridKind::Geometric);
        assert_eq!(g.points, 40);
        assert!(GridSpec::parse("geometric:10:5:4").is_err());
        assert!(GridSpec::parse("geometric:1:2").is_err());
        assert!(GridSpec::parse("spiral:1:2:3").is_err());
    }

    #[test]
    fn breakpoint_grid_flanks_eigenvalues() {
        let op = TensorOperator::single(a1_spectrum()).unwrap();
        let g = GridSpec::parse("breakpoints:2:100:64").unwrap();
        let taus = g.taus(&op, 1_000_000).unwrap();
        // eigenvalues 3, 7, 13, ... each contribute a flanking pair
        assert!(taus.contains(&3.0f64.next_down()));
        assert!(taus.contains(&3.0f64.next_up()));
        assert!(taus.windows(2).all(|w| w[0] < w[1]));
    }
}

//! Curve and map drivers. Grid points are evaluated independently (in
//! parallel on the current rayon pool) and collected in grid order, so the
//! output does not depend on the thread count.

use rayon::prelude::*;

use super::{evaluate, GainError, NumericOptions, Route, Scenario};

/// `count` equally spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, GainError> {
        let g = Grid { start, stop, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GainError> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(GainError::InvalidGrid("bounds must be finite".into()));
        }
        if self.count < 2 {
            return Err(GainError::InvalidGrid(format!(
                "count must be >= 2, got {}",
                self.count
            )));
        }
        if self.stop <= self.start {
            return Err(GainError::InvalidGrid(format!(
                "stop ({}) must exceed start ({})",
                self.stop, self.start
            )));
        }
        let pts = self.points();
        if pts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GainError::InvalidGrid(
                "points are not strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }
}

/// Sweep direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// `x_t` varies with the transmitter on the focal plane `z = F`.
    Transverse,
    /// `z` varies with the transmitter on axis.
    Depth,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Transverse => "x",
            Axis::Depth => "z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningKind {
    NotConverged,
    Unsupported,
    Other,
}

/// A grid cell whose value could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWarning {
    /// Flat index into the grid (row-major, z outer, for maps).
    pub index: usize,
    pub route: Route,
    pub kind: WarningKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveColumn {
    pub route: Route,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainCurve {
    pub axis: Axis,
    pub coordinates: Vec<f64>,
    pub columns: Vec<CurveColumn>,
    pub warnings: Vec<SampleWarning>,
}

impl GainCurve {
    pub fn column(&self, route: Route) -> Option<&CurveColumn> {
        self.columns.iter().find(|c| c.route == route)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainMap {
    pub route: Route,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    /// Row-major with `z` as the outer index.
    pub values: Vec<Option<f64>>,
    pub warnings: Vec<SampleWarning>,
}

impl GainMap {
    pub fn get(&self, ix: usize, iz: usize) -> Option<f64> {
        self.values[iz * self.x.len() + ix]
    }
}

fn classify(err: &GainError) -> WarningKind {
    match err {
        GainError::NotConverged { .. } => WarningKind::NotConverged,
        GainError::Unsupported { .. } => WarningKind::Unsupported,
        _ => WarningKind::Other,
    }
}

fn evaluate_cell(
    template: &Scenario,
    x_t: f64,
    z: f64,
    route: Route,
    opts: &NumericOptions,
) -> Result<f64, GainError> {
    let s = template.with_transmitter(x_t, z)?;
    evaluate(&s, route, opts).map(|g| g.value)
}

/// Sweeps one axis of `template` and evaluates each route at every point.
pub fn gain_curve(
    template: &Scenario,
    axis: Axis,
    grid: &Grid,
    routes: &[Route],
    opts: &NumericOptions,
) -> Result<GainCurve, GainError> {
    grid.validate()?;
    if routes.is_empty() {
        return Err(GainError::InvalidGrid("no routes requested".into()));
    }
    if axis == Axis::Depth && grid.start <= 0.0 {
        return Err(GainError::InvalidGrid(format!(
            "depth grid must be positive, starts at {}",
            grid.start
        )));
    }
    let coordinates = grid.points();
    let cells: Vec<(usize, usize)> = (0..routes.len())
        .flat_map(|r| (0..coordinates.len()).map(move |i| (r, i)))
        .collect();
    let results: Vec<Result<f64, GainError>> = cells
        .par_iter()
        .map(|&(r, i)| {
            let c = coordinates[i];
            let (x_t, z) = match axis {
                Axis::Transverse => (c, template.focus),
                Axis::Depth => (0.0, c),
            };
            evaluate_cell(template, x_t, z, routes[r], opts)
        })
        .collect();

    let mut columns: Vec<CurveColumn> = routes
        .iter()
        .map(|&route| CurveColumn {
            route,
            values: Vec::with_capacity(coordinates.len()),
        })
        .collect();
    let mut warnings = Vec::new();
    for (&(r, i), res) in cells.iter().zip(results) {
        match res {
            Ok(v) => columns[r].values.push(Some(v)),
            Err(e) => {
                columns[r].values.push(None);
                warnings.push(SampleWarning {
                    index: i,
                    route: routes[r],
                    kind: classify(&e),
                    message: e.to_string(),
                });
            }
        }
    }
    warnings.sort_by_key(|w| (w.index, w.route));
    Ok(GainCurve {
        axis,
        coordinates,
        columns,
        warnings,
    })
}

/// Evaluates `route` on the xz-plane grid.
pub fn gain_map(
    template: &Scenario,
    x_grid: &Grid,
    z_grid: &Grid,
    route: Route,
    opts: &NumericOptions,
) -> Result<GainMap, GainError> {
    x_grid.validate()?;
    z_grid.validate()?;
    if z_grid.start <= 0.0 {
        return Err(GainError::InvalidGrid(format!(
            "z grid must be positive, starts at {}",
            z_grid.start
        )));
    }
    let x = x_grid.points();
    let z = z_grid.points();
    let nx = x.len();
    let results: Vec<Result<f64, GainError>> = (0..nx * z.len())
        .into_par_iter()
        .map(|idx| evaluate_cell(template, x[idx % nx], z[idx / nx], route, opts))
        .collect();
    let mut values = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for (index, res) in results.into_iter().enumerate() {
        match res {
            Ok(v) => values.push(Some(v)),
            Err(e) => {
                values.push(None);
                warnings.push(SampleWarning {
                    index,
                    route,
                    kind: classify(&e),
                    message: e.to_string(),
                });
            }
        }
    }
    Ok(GainMap {
        route,
        x,
        z,
        values,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ArrayLayout, CarrierSpec};

    fn template() -> Scenario {
        Scenario::new(
            ArrayLayout::mla(16, 0.01, 1.0).unwrap(),
            CarrierSpec::from_wavelength(0.02).unwrap(),
            30.0,
            0.0,
            30.0,
        )
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 1.0, 3).is_err());
        assert!(Grid::new(2.0, 1.0, 3).is_err());
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn three_point_depth_curve_peaks_at_focus() {
        let opts = NumericOptions::for_wavelength(0.02);
        let c = gain_curve(
            &template(),
            Axis::Depth,
            &Grid::new(29.0, 31.0, 3).unwrap(),
            &[Route::Closed],
            &opts,
        )
        .unwrap();
        assert_eq!(c.columns[0].values[1], Some(1.0));
        assert!(c.columns[0].values[0].unwrap() < 1.0);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn incompatible_cells_are_flagged_not_fatal() {
        let opts = NumericOptions::for_wavelength(0.02);
        let m = gain_map(
            &template(),
            &Grid::new(0.0, 0.5, 2).unwrap(),
            &Grid::new(30.0, 40.0, 2).unwrap(),
            Route::Closed,
            &opts,
        )
        .unwrap();
        assert_eq!(m.get(0, 0), Some(1.0));
        assert_eq!(m.get(1, 0), None);
        assert_eq!(m.warnings.len(), 2);
        assert!(m
            .warnings
            .iter()
            .all(|w| w.kind == WarningKind::Unsupported));
        assert_eq!(m.warnings[0].index, 1);
    }

    #[test]
    fn depth_grid_must_be_positive() {
        let opts = NumericOptions::for_wavelength(0.02);
        assert!(gain_curve(
            &template(),
            Axis::Depth,
            &Grid::new(-1.0, 1.0, 3).unwrap(),
            &[Route::Closed],
            &opts
        )
        .is_err());
    }
}

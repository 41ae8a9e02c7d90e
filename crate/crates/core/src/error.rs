use thiserror::Error;

/// Every failure the optics routines can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpticsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("total internal reflection at incidence {incidence} rad")]
    TotalInternalReflection { incidence: f64 },
    #[error("ray does not hit the surface")]
    NoHit,
    #[error("reflected ray never reaches the table")]
    NoTableHit,
    #[error("no reflection point connects the two points")]
    NoSolution,
    #[error("chief ray grazes the surface")]
    DegenerateChiefRay,
    #[error("neighbouring rays are parallel at parameter {0}")]
    DegenerateParameter(f64),
    #[error("no focal point found within the scan range")]
    NoDegeneracy,
    #[error("{fraction} of the aperture has no reflection path")]
    ApertureOcclusion { fraction: f64 },
    #[error("no refracted chief ray connects source and eye")]
    NoChiefRay,
    #[error("direction lies {angle} rad from vertical, outside Snell's window")]
    OutsideSnellsWindow { angle: f64 },
    #[error("image of {requested_w} x {requested_h} m exceeds the reachable region ({max_w} x {max_h} m)")]
    RegionOverflow {
        requested_w: f64,
        requested_h: f64,
        max_w: f64,
        max_h: f64,
    },
    #[error("content of {needed_w} x {needed_h} mm does not fit the sheet")]
    DoesNotFit { needed_w: f64, needed_h: f64 },
}

impl OpticsError {
    /// Short snake_case tag used in machine-readable diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            OpticsError::InvalidInput(_) => "invalid_input",
            OpticsError::TotalInternalReflection { .. } => "total_internal_reflection",
            OpticsError::NoHit => "no_hit",
            OpticsError::NoTableHit => "no_table_hit",
            OpticsError::NoSolution => "no_solution",
            OpticsError::DegenerateChiefRay => "degenerate_chief_ray",
            OpticsError::DegenerateParameter(_) => "degenerate_parameter",
            OpticsError::NoDegeneracy => "no_degeneracy",
            OpticsError::ApertureOcclusion { .. } => "aperture_occlusion",
            OpticsError::NoChiefRay => "no_chief_ray",
            OpticsError::OutsideSnellsWindow { .. } => "outside_snells_window",
            OpticsError::RegionOverflow { .. } => "region_overflow",
            OpticsError::DoesNotFit { .. } => "does_not_fit",
        }
    }
}

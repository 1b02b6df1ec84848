/// Numerical thresholds used by every check in the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Singular values at or below this count as zero for Schmidt rank.
    pub rank: f64,
    /// Maximum deviation of a Gram matrix from the identity.
    pub orthogonality: f64,
    /// Maximum deviation of a singular value from `1/sqrt(r)` for an MES.
    pub flat_spectrum: f64,
    /// Maximum Frobenius residual of a state outside an effective frame.
    pub out_of_frame: f64,
    /// Singular-value threshold for nullspaces of the OPM constraint system.
    pub nullspace: f64,
    /// Allowed deviation of a Frobenius norm from 1.
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-9,
            orthogonality: 1e-10,
            flat_spectrum: 1e-9,
            out_of_frame: 1e-10,
            nullspace: 1e-9,
            norm: 1e-10,
        }
    }
}

impl Tolerances {
    /// Multiply every threshold by `factor`.
    pub fn scaled(factor: f64) -> Self {
        let d = Self::default();
        Self {
            rank: d.rank * factor,
            orthogonality: d.orthogonality * factor,
            flat_spectrum: d.flat_spectrum * factor,
            out_of_frame: d.out_of_frame * factor,
            nullspace: d.nullspace * factor,
            norm: d.norm * factor,
        }
    }
}

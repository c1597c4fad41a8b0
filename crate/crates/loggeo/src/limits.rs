//! Resource caps for the symbolic computations.
//!
//! Every potentially unbounded search or basis computation takes a
//! [`Limits`] value and fails with an explicit error instead of silently
//! truncating. The `LOGGEO_LIMITS` environment variable overrides the
//! defaults, e.g. `LOGGEO_LIMITS=basis_size=5000,total_degree=20`.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of polynomials a Groebner basis may reach.
    pub basis_size: usize,
    /// Maximum total degree of any leading monomial during reduction.
    pub total_degree: u32,
    /// Multiplier for the monoid search height bound.
    pub height_mult: i64,
    /// Largest diagonal level `n` the verification suites will attempt.
    pub n_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            basis_size: 20_000,
            total_degree: 40,
            height_mult: 4,
            n_max: 3,
        }
    }
}

impl Limits {
    /// Defaults overridden by the `LOGGEO_LIMITS` environment variable.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Ok(spec) = std::env::var("LOGGEO_LIMITS") {
            limits.apply_spec(&spec);
        }
        limits
    }

    /// Parse a `key=value,key=value` override string. Unknown keys and
    /// malformed values are ignored.
    pub fn apply_spec(&mut self, spec: &str) {
        for part in spec.split(',') {
            let mut it = part.splitn(2, '=');
            let (Some(key), Some(val)) = (it.next(), it.next()) else {
                continue;
            };
            match key.trim() {
                "basis_size" => {
                    if let Ok(v) = val.trim().parse() {
                        self.basis_size = v;
                    }
                }
                "total_degree" => {
                    if let Ok(v) = val.trim().parse() {
                        self.total_degree = v;
                    }
                }
                "height_mult" => {
                    if let Ok(v) = val.trim().parse() {
                        self.height_mult = v;
                    }
                }
                "n_max" => {
                    if let Ok(v) = val.trim().parse() {
                        self.n_max = v;
                    }
                }
                _ => {}
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_overrides() {
        let mut l = Limits::default();
        l.apply_spec("basis_size=100, total_degree=7,junk=3,n_max=2");
        assert_eq!(l.basis_size, 100);
        assert_eq!(l.total_degree, 7);
        assert_eq!(l.n_max, 2);
        assert_eq!(l.height_mult, Limits::default().height_mult);
    }
}

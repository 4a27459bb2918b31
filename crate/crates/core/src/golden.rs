//! Published reference values used by the self-checks.

/// A quoted reference constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Golden {
    pub name: &'static str,
    pub value: f64,
    /// The value exactly as quoted, for extended-precision comparisons.
    pub digits: &'static str,
    /// Relative tolerance a computed value must meet to pass.
    pub rel_tol: f64,
    pub citation: &'static str,
}

impl Golden {
    pub fn rel_err(&self, computed: f64) -> f64 {
        if self.value == 0.0 {
            computed.abs()
        } else {
            ((computed - self.value) / self.value).abs()
        }
    }

    pub fn passes(&self, computed: f64) -> bool {
        self.rel_err(computed) <= self.rel_tol
    }
}

const fn g(name: &'static str, value: f64, digits: &'static str, rel_tol: f64, citation: &'static str) -> Golden {
    Golden {
        name,
        value,
        digits,
        rel_tol,
        citation,
    }
}

pub const SAW_C4: Golden = g("saw_c4", 100.0, "100", 0.0, "square-lattice walk count c_4 = 100");
pub const SAW_MU: Golden = g(
    "saw_mu",
    2.6381585303,
    "2.6381585303",
    5e-3,
    "square-lattice connective constant estimate",
);
pub const POLYGON_P8: Golden = g("polygon_p8", 7.0, "7", 0.0, "seven 8-sided polygons");
pub const POLYGON_P8_AREA3: Golden = g("polygon_p8_area3", 6.0, "6", 0.0, "six 8-sided polygons of area 3");
pub const CROSSING_LAMBDA: Golden = g(
    "crossing_lambda",
    1.744550,
    "1.744550",
    0.02 / 1.744550,
    "corner-to-corner crossing growth constant from enumerations to side 19",
);
pub const CROSSING_LAMBDA_LOWER: Golden = g("crossing_lambda_lower", 1.628, "1.628", 0.0, "rigorous lower bound on the crossing growth constant");
pub const CROSSING_LAMBDA_UPPER: Golden = g("crossing_lambda_upper", 1.782, "1.782", 0.0, "rigorous upper bound on the crossing growth constant");
pub const NU: Golden = g("nu", 0.75, "0.75", 0.04, "two-dimensional size exponent nu = 3/4");
pub const ALPHA_R10: Golden = g(
    "alpha_r10",
    1.000_001_205_614_547,
    "1.00000120561454706472212",
    1e-15,
    "Schwarz-Christoffel parameter alpha for the 10:1 rectangle",
);
pub const BROWNIAN_R10: Golden = g(
    "brownian_ratio_r10",
    3.8375894519594e-7,
    "3.8375894519594e-7",
    5e-13,
    "Brownian end-to-side hitting ratio, 10:1 rectangle, 13 digits",
);
pub const SAW_RATIO_R10: Golden = g(
    "saw_ratio_r10",
    6.682989935e-5,
    "6.682989935e-5",
    5e-9,
    "hitting ratio at b = 5/8, 10:1 rectangle, by quadrature",
);
pub const ASYMPTOTIC_PREFACTOR: Golden = g(
    "asymptotic_prefactor_b5_8",
    1.2263431442,
    "1.2263431442",
    5e-11,
    "large-r prefactor of the b = 5/8 hitting ratio",
);
pub const ASYMPTOTIC_R10: Golden = g(
    "asymptotic_ratio_r10",
    6.6824528e-5,
    "6.6824528e-5",
    1e-7,
    "leading-order large-r hitting ratio at r = 10, b = 5/8",
);
pub const REFINED_R10: Golden = g(
    "refined_ratio_r10",
    6.682989679e-5,
    "0.00006682989679",
    1e-9,
    "two-term Mellin expansion of the hitting ratio at r = 10, b = 5/8",
);
pub const TREFETHEN_PE: Golden = g(
    "trefethen_pe",
    3.83758797925e-7,
    "0.000000383758797925",
    1e-11,
    "Brownian end-hit probability for the 10:1 rectangle, closed form",
);
pub const TREFETHEN_RATIO: Golden = g(
    "trefethen_ratio",
    3.837_589_451_959_941e-7,
    "0.00000038375894519599411176841999126970034234598936",
    1e-13,
    "p_e / (1 - p_e) for the 10:1 rectangle, 50 digits",
);

/// Every reference constant, in a stable order.
pub const ALL: &[Golden] = &[
    SAW_C4,
    SAW_MU,
    POLYGON_P8,
    POLYGON_P8_AREA3,
    CROSSING_LAMBDA,
    CROSSING_LAMBDA_LOWER,
    CROSSING_LAMBDA_UPPER,
    NU,
    ALPHA_R10,
    BROWNIAN_R10,
    SAW_RATIO_R10,
    ASYMPTOTIC_PREFACTOR,
    ASYMPTOTIC_R10,
    REFINED_R10,
    TREFETHEN_PE,
    TREFETHEN_RATIO,
];

pub fn lookup(name: &str) -> Option<&'static Golden> {
    ALL.iter().find(|g| g.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_agree_with_values() {
        for g in ALL {
            let parsed: f64 = g.digits.parse().unwrap();
            assert!(g.rel_err(parsed) < 1e-15, "{}", g.name);
        }
    }

    #[test]
    fn names_are_unique() {
        let names: std::collections::HashSet<_> = ALL.iter().map(|g| g.name).collect();
        assert_eq!(names.len(), ALL.len());
        assert_eq!(lookup("saw_c4"), Some(&SAW_C4));
        assert!(lookup("missing").is_none());
    }
}

use num_complex::Complex64;

/// Kronrod abscissae on `[0, 1]` of the 21-point rule (the negative half is
/// symmetric). Odd indices are the 10-point Gauss nodes.
pub const GK21_NODES: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

pub const GK21_WEIGHTS: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_709_190,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for `GK21_NODES[1], [3], …, [9]`.
pub const G10_WEIGHTS: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

pub(crate) struct RuleResult {
    pub kronrod: Complex64,
    pub error: f64,
    /// Rounding floor of the rule on this panel.
    pub roundoff: f64,
    /// Set when the integrand returned NaN or ±∞; holds the offending abscissa.
    pub non_finite_at: Option<f64>,
}

/// Applies the 10/21 pair on `[a, b]`.
pub(crate) fn gk21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> RuleResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut non_finite_at = None;

    let mut eval = |x: f64, non_finite_at: &mut Option<f64>| {
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) && non_finite_at.is_none() {
            *non_finite_at = Some(x);
        }
        v
    };

    let fc = eval(center, &mut non_finite_at);
    kronrod += fc * GK21_WEIGHTS[10];
    abs_sum += fc.norm() * GK21_WEIGHTS[10];
    for i in 0..10 {
        let dx = half * GK21_NODES[i];
        let f1 = eval(center - dx, &mut non_finite_at);
        let f2 = eval(center + dx, &mut non_finite_at);
        let s = f1 + f2;
        kronrod += s * GK21_WEIGHTS[i];
        abs_sum += (f1.norm() + f2.norm()) * GK21_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += s * G10_WEIGHTS[i / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    let roundoff = 50.0 * f64::EPSILON * abs_sum * half.abs();
    RuleResult {
        kronrod,
        error: (kronrod - gauss).norm().max(roundoff),
        roundoff,
        non_finite_at,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_poly(deg: i32, gauss_only: bool) -> f64 {
        let f = |x: f64| x.powi(deg);
        if gauss_only {
            let mut s = 0.0;
            for i in 0..5 {
                let x = GK21_NODES[2 * i + 1];
                s += G10_WEIGHTS[i] * (f(x) + f(-x));
            }
            s
        } else {
            let mut s = GK21_WEIGHTS[10] * f(0.0);
            for i in 0..10 {
                let x = GK21_NODES[i];
                s += GK21_WEIGHTS[i] * (f(x) + f(-x));
            }
            s
        }
    }

    #[test]
    fn kronrod_is_exact_to_degree_31() {
        for deg in (0..=30).step_by(2) {
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((integrate_poly(deg, false) - exact).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn gauss_is_exact_to_degree_19() {
        for deg in (0..=18).step_by(2) {
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((integrate_poly(deg, true) - exact).abs() < 1e-14, "deg {deg}");
        }
        // and no further
        assert!((integrate_poly(20, true) - 2.0 / 21.0).abs() > 1e-10);
    }

    #[test]
    fn smooth_complex_integrand() {
        let mut f = |x: f64| Complex64::new(0.0, x).exp();
        let r = gk21(&mut f, 0.0, 1.0);
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.kronrod - exact).norm() < 1e-15);
        assert!(r.non_finite_at.is_none());
    }
}

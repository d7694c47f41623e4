use super::QuadValue;

// 21-point Kronrod abscissae (non-negative half, descending) and weights,
// with the embedded 10-point Gauss weights for the odd-indexed abscissae.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_149_138,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Kronrod value and error estimate on one cell.
#[derive(Debug, Clone, Copy)]
pub struct CellEstimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Apply the G10/K21 pair on [a, b].
///
/// The error estimate uses the usual rescaling of |K21 − G10| against the
/// mean absolute deviation of the integrand, which is pessimistic for smooth
/// integrands and never smaller than 50 ε |∫|f||.
pub fn gauss_kronrod_21<T, F>(f: &F, a: f64, b: f64) -> CellEstimate<T>
where
    T: QuadValue,
    F: Fn(f64) -> T + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_k = fc.scale(WGK[10]);
    let mut res_g = T::zero();
    let mut res_abs = WGK[10] * fc.norm();

    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let s = f1.add(f2);
        res_k = res_k.add(s.scale(WGK[j]));
        if j % 2 == 1 {
            res_g = res_g.add(s.scale(WG[j / 2]));
        }
        res_abs += WGK[j] * (f1.norm() + f2.norm());
    }

    let mean = res_k.scale(0.5);
    let mut res_asc = WGK[10] * fc.sub(mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * (fv1[j].sub(mean).norm() + fv2[j].sub(mean).norm());
    }

    let value = res_k.scale(half);
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = res_k.sub(res_g).scale(half).norm();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    CellEstimate {
        value,
        error: err,
        evaluations: 21,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_exactness() {
        // Kronrod-21 integrates degree <= 31 exactly; Gauss-10 degree <= 19.
        for deg in [0_i32, 1, 5, 19, 30, 31] {
            let f = |x: f64| x.powi(deg);
            let est: CellEstimate<f64> = gauss_kronrod_21(&f, 0.0, 1.0);
            let exact = 1.0 / f64::from(deg + 1);
            assert!(
                (est.value - exact).abs() < 1e-14,
                "degree {deg}: {} vs {exact}",
                est.value
            );
        }
        // error estimate collapses for polynomials the Gauss rule is exact on
        let est: CellEstimate<f64> = gauss_kronrod_21(&|x: f64| x.powi(19), -1.0, 2.0);
        assert!(est.error / est.value.abs() < 1e-13);
    }

    #[test]
    fn complex_componentwise() {
        use num_complex::Complex64;
        let f = |x: f64| Complex64::new(x.cos(), x.sin());
        let est: CellEstimate<Complex64> = gauss_kronrod_21(&f, 0.0, 1.0);
        assert!((est.value.re - 1f64.sin()).abs() < 1e-15);
        assert!((est.value.im - (1.0 - 1f64.cos())).abs() < 1e-15);
    }
}

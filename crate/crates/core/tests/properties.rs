use gnrad::exactparams::{
    classify, derive, fmt_rational, parse_rational, rat, theorem_verdicts, ParamError, RangeClass,
    TupleSampler,
};
use gnrad::kernels::AngularKernel;
use proptest::prelude::*;

proptest! {
    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = rat(n, d);
        prop_assert_eq!(parse_rational(&fmt_rational(&x)).unwrap(), x);
    }

    #[test]
    fn range_and_verdicts_agree(seed in 0u64..500, k in 2i64..16) {
        // Moving gamma away from the sampled value reaches inadmissible tuples too.
        let base = TupleSampler::new(seed).sample();
        let Ok(t) = base.with_gamma(&base.gamma * rat(k, 6)) else { return Ok(()) };
        let Ok(derived) = derive(&t) else { return Ok(()) };
        let range = classify(&t).unwrap();
        match theorem_verdicts(&t) {
            Ok(_) => prop_assert!(derived.betas_positive() && range != RangeClass::Inadmissible),
            Err(ParamError::InadmissibleBetas { .. }) => prop_assert_eq!(range, RangeClass::Inadmissible),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn riesz_kernel_symmetric_and_homogeneous(
        d in 2u32..6,
        alpha_frac in 0.05f64..0.95,
        r in 0.1f64..10.0,
        rho in 0.1f64..10.0,
        c in 0.5f64..4.0,
    ) {
        prop_assume!((r - rho).abs() > 1e-3);
        let alpha = alpha_frac * f64::from(d);
        let k = AngularKernel::riesz(d, alpha).unwrap();
        let a = k.value(r, rho).unwrap();
        let b = k.value(rho, r).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
        // A(c r, c rho) = c^-(d - alpha) A(r, rho)
        let scaled = k.value(c * r, c * rho).unwrap();
        let expected = c.powf(-(f64::from(d) - alpha)) * a;
        prop_assert!((scaled - expected).abs() <= 1e-9 * expected.abs());
    }
}

mod common;

use common::*;
use rand::Rng;
use skewdet::series::{Series, Valuation};

const CASES: usize = 40;

fn pi(k: &std::sync::Arc<skewdet::field::FieldSpec>, prec: i64) -> Series {
    Series::from_terms(k.clone(), &[k.zero(), k.one()], prec)
}

#[test]
fn multiplication_is_associative() {
    for (ci, (name, k)) in engine_configs().into_iter().enumerate() {
        let mut rng = rng(100 + ci as u64);
        for _ in 0..CASES {
            let len = rng.gen_range(1..6);
            let a = series(&k, rng.gen_range(0..3), len, &mut rng);
            let b = series(&k, rng.gen_range(0..3), len, &mut rng);
            let c = series(&k, rng.gen_range(0..3), len, &mut rng);
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            let h = l.prec().min(r.prec());
            assert_eq!(l.truncate(h - 1), r.truncate(h - 1), "{name}");
        }
    }
}

#[test]
fn pi_multiplication_agrees_with_series_product() {
    for (ci, (name, k)) in engine_configs().into_iter().enumerate() {
        let mut rng = rng(200 + ci as u64);
        for _ in 0..CASES {
            let a = series(&k, rng.gen_range(0..3), rng.gen_range(1..7), &mut rng);
            let via_mul = pi(&k, a.prec() + 2).mul(&a).unwrap();
            assert_eq!(via_mul, a.left_mul_pi(), "{name}");
            assert_eq!(
                a.left_mul_pi_pow(3),
                a.left_mul_pi().left_mul_pi().left_mul_pi(),
                "{name}"
            );
            // right multiplication by π is a plain shift
            assert_eq!(
                a.mul(&pi(&k, a.prec() + 2)).unwrap(),
                a.right_shift(1),
                "{name}"
            );
        }
    }
}

#[test]
fn unit_inverse_is_two_sided() {
    for (ci, (name, k)) in engine_configs().into_iter().enumerate() {
        let mut rng = rng(300 + ci as u64);
        for _ in 0..CASES {
            let len = rng.gen_range(1..8);
            let u = unit_series(&k, len, &mut rng);
            let w = u.invert_unit().unwrap();
            assert_eq!(w.prec(), u.prec());
            let one = Series::constant(k.clone(), k.one(), u.prec());
            assert_eq!(u.mul(&w).unwrap(), one, "{name}: u·w");
            assert_eq!(w.mul(&u).unwrap(), one, "{name}: w·u");
        }
    }
}

#[test]
fn right_division_inverts_multiplication() {
    for (ci, (name, k)) in engine_configs().into_iter().enumerate() {
        let mut rng = rng(400 + ci as u64);
        for _ in 0..CASES {
            let len = rng.gen_range(2..8);
            let d = unit_series(&k, len, &mut rng).right_shift(rng.gen_range(0..3));
            let c = series(&k, rng.gen_range(0..3), len, &mut rng);
            let a = c.mul(&d).unwrap();
            let q = a.right_div(&d).unwrap();
            let back = q.mul(&d).unwrap();
            let h = back.prec().min(a.prec());
            assert_eq!(back.truncate(h - 1), a.truncate(h - 1), "{name}");
            assert!(
                h > d.valuation().lower_bound(),
                "{name}: nothing left to compare"
            );
        }
    }
}

#[test]
fn valuation_is_additive() {
    for (ci, (name, k)) in engine_configs().into_iter().enumerate() {
        let mut rng = rng(500 + ci as u64);
        for _ in 0..CASES {
            let a = unit_series(&k, 5, &mut rng).right_shift(rng.gen_range(0..3));
            let b = unit_series(&k, 5, &mut rng).right_shift(rng.gen_range(0..3));
            let (Valuation::Known(va), Valuation::Known(vb)) = (a.valuation(), b.valuation())
            else {
                unreachable!("units shifted by π^e have known valuation");
            };
            assert_eq!(
                a.mul(&b).unwrap().valuation(),
                Valuation::Known(va + vb),
                "{name}"
            );
        }
    }
}

#[test]
fn precision_is_tracked() {
    let (_, k) = engine_configs().remove(3);
    let a = Series::zero(k.clone(), 4);
    assert_eq!(a.valuation(), Valuation::AtLeast(4));
    assert!(a.is_zero_to_precision());
    let b = Series::from_terms(k.clone(), &[k.zero(), k.zero(), k.one()], 6);
    assert_eq!(b.truncate(1).valuation(), Valuation::AtLeast(2));
    assert_eq!(b.with_exact_prec(9).prec(), 9);
    assert!(b.invert_unit().is_err());
    assert!(pi(&k, 4).right_div(&b).is_err());
}

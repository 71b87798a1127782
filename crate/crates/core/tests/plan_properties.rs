use laurent_core::plan::{build_m, chi, IntMatrix};
use laurent_core::*;

#[test]
fn indicators_partition_for_all_orders() {
    for n in 1..=32 {
        let mut sum = IntMatrix::zeros(n, n);
        for l in 0..n {
            sum = &sum + chi(l, n).unwrap().matrix();
        }
        assert!(sum.entries().all(|e| e.2 == 1), "N={n}");
    }
}

#[test]
fn weighted_matrices_are_ternary_and_factor_exactly() {
    for n in (4..=32).step_by(4) {
        let plan = build_plan(n).unwrap();
        assert!(plan.is_optimal(), "N={n}");
        for term in plan.terms() {
            for tm in [&term.real, &term.imag] {
                let t = tm.matrix.matrix();
                assert!(t.entries().all(|e| (-1..=1).contains(&e.2)));
                assert_eq!(&(tm.factored.combiner() * tm.factored.reduced_rows()), t);
                assert_eq!(tm.factored.width(), tm.factored.rank());
            }
        }
    }
}

#[test]
fn gaussian_entries_are_units() {
    for n in (4..=32).step_by(4) {
        let q = (n / 4) as i64;
        for m in -q..q {
            let mm = build_m(m, n).unwrap();
            for ((_, _, a), (_, _, b)) in mm.re().entries().zip(mm.im().entries()) {
                assert!(a == 0 && b == 0 || a.abs() + b.abs() == 1);
            }
        }
    }
}

#[test]
fn term_layout_follows_length_class() {
    for n in (4..=32).step_by(4) {
        let plan = build_plan(n).unwrap();
        let pairs = (n / 4 - 1) / 2;
        let middle = usize::from(n % 8 == 0);
        assert_eq!(plan.terms().len(), 1 + 2 * pairs + middle, "N={n}");
    }
}

#[test]
fn unsupported_orders() {
    for n in [1usize, 2, 3, 5, 6, 10, 18, 30] {
        assert_eq!(build_plan(n).unwrap_err(), Error::UnsupportedLength(n));
    }
}

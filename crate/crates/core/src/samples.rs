//! Small named arrangements used by the tests, the acceptance suite and `--seed-examples`.

use crate::arrangement::{Hypertorus, PhaseQZ, ToricArrangement};
use crate::exactlin::IntMatrix;

fn centred(m: IntMatrix) -> ToricArrangement {
    ToricArrangement::centred(&m).expect("sample arrangement is valid")
}

/// `x = 1`, `y = 1`, `xy^3 = 1`, `xy^2 = e(1/3)` in rank two.
pub fn four_hypertori() -> ToricArrangement {
    let z = PhaseQZ::zero;
    ToricArrangement::new(
        2,
        vec![
            Hypertorus::from_i64(&[1, 0], z()),
            Hypertorus::from_i64(&[0, 1], z()),
            Hypertorus::from_i64(&[1, 3], z()),
            Hypertorus::from_i64(&[1, 2], PhaseQZ::new(1, 3)),
        ],
    )
    .expect("sample arrangement is valid")
}

/// Columns of `(-2 -32 -43; 1 21 29)`.
pub fn three_lines_matrix() -> IntMatrix {
    IntMatrix::from_i64(&[[-2, -32, -43], [1, 21, 29]])
}

pub fn three_lines() -> ToricArrangement {
    centred(three_lines_matrix())
}

/// The representations `C_a = (1 2a-5 3a-5; 0 10 15)` for `a = 1..4`.
pub fn c_a(a: i64) -> IntMatrix {
    IntMatrix::from_i64(&[[1, 2 * a - 5, 3 * a - 5], [0, 10, 15]])
}

/// `(1,0), (0,1), (1,1)`.
pub fn triangle() -> ToricArrangement {
    centred(IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 1]]))
}

/// Columns of `(1 1 2; 0 7 7)` and `(1 2 3; 0 7 7)`: same intersection poset, distinct covers.
pub fn z7_pair() -> (ToricArrangement, ToricArrangement) {
    (
        centred(IntMatrix::from_i64(&[[1, 1, 2], [0, 7, 7]])),
        centred(IntMatrix::from_i64(&[[1, 2, 3], [0, 7, 7]])),
    )
}

/// Columns of `(1 1 0 0; 0 7 1 1)`; the last two characters coincide.
pub fn parallel_characters() -> IntMatrix {
    IntMatrix::from_i64(&[[1, 1, 0, 0], [0, 7, 1, 1]])
}

/// `parallel_characters` with phases `(0, 0, 0, k/7)`.
pub fn parallel_translate(k: i64) -> ToricArrangement {
    let z = PhaseQZ::zero();
    ToricArrangement::with_phases(&parallel_characters(), &[z.clone(), z.clone(), z, PhaseQZ::new(k, 7)])
        .expect("sample arrangement is valid")
}

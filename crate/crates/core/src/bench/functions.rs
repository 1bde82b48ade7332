//! Catalog of benchmark functions on [−1, 1].
//!
//! Each entry carries its jump locations and, per smooth piece, an optional
//! exact antiderivative. Where an antiderivative exists the data synthesis
//! uses it directly and cross-checks the quadrature against it; pieces
//! without a closed form fall back to quadrature alone.

use std::f64::consts::{PI, SQRT_2};

/// One maximal smooth piece of a test function.
pub struct Piece {
    pub f: fn(f64) -> f64,
    /// Exact antiderivative of `f` on the piece, if available in closed form.
    pub anti: Option<fn(f64) -> f64>,
}

/// A named test function: piecewise smooth, bounded, with known jumps.
pub struct TestFunction {
    pub name: &'static str,
    /// Strictly increasing jump locations, all interior to the domain.
    pub jumps: &'static [f64],
    /// `jumps.len() + 1` smooth pieces; piece `i` applies on
    /// `(jumps[i−1], jumps[i]]` (at a jump the left piece wins — a
    /// measure-zero convention that never affects integrals).
    pub pieces: &'static [Piece],
}

impl TestFunction {
    /// Index of the piece owning x.
    pub fn piece_index(&self, x: f64) -> usize {
        self.jumps.partition_point(|&j| j < x)
    }

    pub fn piece(&self, i: usize) -> &Piece {
        &self.pieces[i]
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.pieces[self.piece_index(x)].f)(x)
    }
}

fn f5_left(x: f64) -> f64 {
    (17.0 / 8.0 * PI * x).sin()
}
fn f5_left_anti(x: f64) -> f64 {
    -(8.0 / (17.0 * PI)) * (17.0 / 8.0 * PI * x).cos()
}
fn f5_right(x: f64) -> f64 {
    0.5 * (17.0 / 8.0 * PI * x).sin() + 10.0
}
fn f5_right_anti(x: f64) -> f64 {
    -(4.0 / (17.0 * PI)) * (17.0 / 8.0 * PI * x).cos() + 10.0 * x
}

fn runge25(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * x * x)
}
fn runge25_anti(x: f64) -> f64 {
    (5.0 * x).atan() / 5.0
}
fn pole15(x: f64) -> f64 {
    1.0 / (x - 1.5)
}
fn pole15_anti(x: f64) -> f64 {
    (1.5 - x).ln()
}
fn bump_wide(x: f64) -> f64 {
    5.0 / ((x / 4.0) * (x / 4.0) + 1.0)
}
fn bump_wide_anti(x: f64) -> f64 {
    20.0 * (x / 4.0).atan()
}

pub static F1: TestFunction = TestFunction {
    name: "f1",
    jumps: &[],
    pieces: &[Piece {
        f: runge25,
        anti: Some(runge25_anti),
    }],
};

pub static F2: TestFunction = TestFunction {
    name: "f2",
    jumps: &[],
    pieces: &[Piece {
        f: |x| (5.0 * PI * x).cos(),
        anti: Some(|x| (5.0 * PI * x).sin() / (5.0 * PI)),
    }],
};

pub static F3: TestFunction = TestFunction {
    name: "f3",
    jumps: &[],
    pieces: &[Piece {
        f: pole15,
        anti: Some(pole15_anti),
    }],
};

pub static F4: TestFunction = TestFunction {
    name: "f4",
    jumps: &[],
    pieces: &[Piece {
        f: |x| (50.0 * PI * x).cos(),
        anti: Some(|x| (50.0 * PI * x).sin() / (50.0 * PI)),
    }],
};

pub static F5: TestFunction = TestFunction {
    name: "f5",
    jumps: &[0.0],
    pieces: &[
        Piece {
            f: f5_left,
            anti: Some(f5_left_anti),
        },
        Piece {
            f: f5_right,
            anti: Some(f5_right_anti),
        },
    ],
};

pub static F6: TestFunction = TestFunction {
    name: "f6",
    jumps: &[0.0],
    pieces: &[
        Piece {
            f: |x| 0.5 * x.powi(5) - x * x,
            anti: Some(|x| x.powi(6) / 12.0 - x.powi(3) / 3.0),
        },
        Piece {
            f: |x| x.powi(6) - x.powi(4) + x * x - 2.0,
            anti: Some(|x| x.powi(7) / 7.0 - x.powi(5) / 5.0 + x.powi(3) / 3.0 - 2.0 * x),
        },
    ],
};

pub static F7: TestFunction = TestFunction {
    name: "f7",
    jumps: &[0.0],
    pieces: &[
        Piece {
            f: |x| (0.5 * (x + 1.0)).exp(),
            anti: Some(|x| 2.0 * (0.5 * (x + 1.0)).exp()),
        },
        Piece {
            f: |x| 1.0 + (0.25 * (x + 1.0) * (x + 1.0)).exp(),
            // ∫e^{(x+1)²/4} has no elementary form; quadrature only.
            anti: None,
        },
    ],
};

pub static F8: TestFunction = TestFunction {
    name: "f8",
    jumps: &[-0.5, 0.0, 0.5],
    pieces: &[
        Piece {
            f: bump_wide,
            anti: Some(bump_wide_anti),
        },
        Piece {
            f: |_| 1.5,
            anti: Some(|x| 1.5 * x),
        },
        Piece {
            f: |_| 0.25,
            anti: Some(|x| 0.25 * x),
        },
        Piece {
            f: bump_wide,
            anti: Some(bump_wide_anti),
        },
    ],
};

pub static G1: TestFunction = TestFunction {
    name: "g1",
    jumps: &[],
    pieces: &[Piece {
        f: runge25,
        anti: Some(runge25_anti),
    }],
};

pub static G2: TestFunction = TestFunction {
    name: "g2",
    jumps: &[],
    pieces: &[Piece {
        f: |x| 1.0 / (1.0 + 8.0 * x * x),
        anti: Some(|x| (2.0 * SQRT_2 * x).atan() / (2.0 * SQRT_2)),
    }],
};

pub static G3: TestFunction = TestFunction {
    name: "g3",
    jumps: &[],
    pieces: &[Piece {
        f: |x| (x * x + 1.0).exp(),
        // ∫e^{x²+1} has no elementary form; quadrature only.
        anti: None,
    }],
};

pub static G4: TestFunction = TestFunction {
    name: "g4",
    jumps: &[],
    pieces: &[Piece {
        f: |x| (5.0 * x).cos(),
        anti: Some(|x| (5.0 * x).sin() / 5.0),
    }],
};

pub static G5: TestFunction = TestFunction {
    name: "g5",
    jumps: &[],
    pieces: &[Piece {
        f: pole15,
        anti: Some(pole15_anti),
    }],
};

pub static G6: TestFunction = TestFunction {
    name: "g6",
    jumps: &[],
    pieces: &[Piece {
        f: |x| x * x.abs().powi(3),
        anti: Some(|x| x.abs().powi(5) / 5.0),
    }],
};

/// Every catalog entry, in declaration order.
pub static ALL: &[&TestFunction] = &[
    &F1, &F2, &F3, &F4, &F5, &F6, &F7, &F8, &G1, &G2, &G3, &G4, &G5, &G6,
];

pub fn by_name(name: &str) -> Option<&'static TestFunction> {
    ALL.iter().copied().find(|f| f.name == name)
}

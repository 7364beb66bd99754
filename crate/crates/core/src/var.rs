//! Variables and coordinate pairs.

use core::fmt;

/// Maximum number of indeterminates a polynomial can carry.
///
/// Indices `0..5` are the named variables `x, y, z, u, v`; the remaining
/// slots are anonymous atoms used when a transcendental subexpression is
/// treated as an indeterminate during simplification.
pub const MAX_VARS: usize = 12;

/// Number of named variables.
pub const NAMED_VARS: usize = 5;

/// A polynomial indeterminate.
///
/// The order `x < y < z < u < v < atoms` is the global variable order used
/// by the graded-lexicographic monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u8);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);
    /// Stands for the derivative `y'` in presentation polynomials.
    pub const Z: Var = Var(2);
    pub const U: Var = Var(3);
    pub const V: Var = Var(4);

    pub const NAMED: [Var; NAMED_VARS] = [Var::X, Var::Y, Var::Z, Var::U, Var::V];

    /// The `i`-th anonymous atom slot, if it exists.
    pub fn atom(i: usize) -> Option<Var> {
        let idx = NAMED_VARS + i;
        (idx < MAX_VARS).then_some(Var(idx as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        (i < MAX_VARS).then_some(Var(i as u8))
    }

    pub fn is_named(self) -> bool {
        self.index() < NAMED_VARS
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            "u" => Some(Var::U),
            "v" => Some(Var::V),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("x"),
            1 => f.write_str("y"),
            2 => f.write_str("z"),
            3 => f.write_str("u"),
            4 => f.write_str("v"),
            n => write!(f, "t{}", n as usize - NAMED_VARS),
        }
    }
}

/// Working coordinates of a web: the independent variable and the dependent
/// one. The slope variable is always [`Var::Z`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coords {
    pub first: Var,
    pub second: Var,
}

impl Coords {
    pub const XY: Coords = Coords { first: Var::X, second: Var::Y };
    pub const UV: Coords = Coords { first: Var::U, second: Var::V };

    pub fn new(first: Var, second: Var) -> Option<Coords> {
        let ok = first != second && first != Var::Z && second != Var::Z && first.is_named() && second.is_named();
        ok.then_some(Coords { first, second })
    }

    pub fn contains(self, v: Var) -> bool {
        v == self.first || v == self.second
    }
}

impl Default for Coords {
    fn default() -> Self {
        Coords::XY
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

//! Symbolic order types of the linear orders presented by cluster
//! expressions: finite blocks, a marked stationary point, and omega /
//! reverse-omega multiples.
//!
//! Canonicalization merges adjacent finite blocks, collapses finite
//! multiples of `w` and `w*` (`F(k)*w = w`), and absorbs finite blocks into
//! a neighbouring multiple when that leaves the order type unchanged
//! (`w* + F(k) = w*` and dually). Equality of canonical forms is syntactic;
//! no general isomorphism procedure is attempted.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// A finite run of `k` points.
    Fin(usize),
    /// A single stationary point.
    One,
    /// `X * w`: omega many copies of `X`.
    OmegaMul(OrderType),
    /// `X * w*`: reverse-omega many copies of `X`.
    OmegaStarMul(OrderType),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrderType(pub Vec<Atom>);

impl OrderType {
    pub fn canonical(mut self) -> OrderType {
        loop {
            let before = self.clone();
            self = pass(self);
            if self == before {
                return self;
            }
        }
    }

    fn is_all_fin(&self) -> bool {
        self.0.iter().all(|a| matches!(a, Atom::Fin(_)))
    }
}

fn pass(ot: OrderType) -> OrderType {
    let mut out: Vec<Atom> = Vec::with_capacity(ot.0.len());
    for atom in ot.0 {
        let atom = match atom {
            Atom::OmegaMul(x) => {
                let x = x.canonical();
                if x.is_all_fin() {
                    Atom::OmegaMul(OrderType(vec![Atom::Fin(1)]))
                } else {
                    Atom::OmegaMul(x)
                }
            }
            Atom::OmegaStarMul(x) => {
                let x = x.canonical();
                if x.is_all_fin() {
                    Atom::OmegaStarMul(OrderType(vec![Atom::Fin(1)]))
                } else {
                    Atom::OmegaStarMul(x)
                }
            }
            a => a,
        };
        match (out.last_mut(), atom) {
            // F(j) + F(k) = F(j + k)
            (Some(Atom::Fin(j)), Atom::Fin(k)) => *j += k,
            // absorb a finite block after a reverse-omega tail
            (Some(last), Atom::Fin(_)) if absorbs_top(last) => {}
            // absorb a finite block before an omega ramp
            (Some(Atom::Fin(_)), a) if absorbs_bottom(&a) => {
                out.pop();
                out.push(a);
            }
            (_, a) => out.push(a),
        }
    }
    OrderType(out)
}

/// Whether `atom + F(k)` is isomorphic to `atom`: true for `X * w*` when
/// trailing points can be shifted into the last copy.
fn absorbs_top(atom: &Atom) -> bool {
    match atom {
        Atom::OmegaStarMul(x) => x.is_all_fin() || x.0.last().is_some_and(absorbs_top),
        _ => false,
    }
}

/// Whether `F(k) + atom` is isomorphic to `atom`.
fn absorbs_bottom(atom: &Atom) -> bool {
    match atom {
        Atom::OmegaMul(x) => x.is_all_fin() || x.0.first().is_some_and(absorbs_bottom),
        _ => false,
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(&self.0, f, true)
    }
}

fn write_sum(atoms: &[Atom], f: &mut fmt::Formatter<'_>, outer: bool) -> fmt::Result {
    let sep = if outer { " + " } else { "+" };
    for (i, atom) in atoms.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        write_atom(atom, f)?;
    }
    Ok(())
}

fn write_atom(atom: &Atom, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match atom {
        Atom::Fin(k) => write!(f, "F({k})"),
        Atom::One => write!(f, "1"),
        Atom::OmegaMul(x) if x.0 == [Atom::Fin(1)] => write!(f, "w"),
        Atom::OmegaStarMul(x) if x.0 == [Atom::Fin(1)] => write!(f, "w*"),
        Atom::OmegaMul(x) => {
            write!(f, "(")?;
            write_sum(&x.0, f, false)?;
            write!(f, ")\u{b7}w")
        }
        Atom::OmegaStarMul(x) => {
            write!(f, "(")?;
            write_sum(&x.0, f, false)?;
            write!(f, ")\u{b7}w*")
        }
    }
}

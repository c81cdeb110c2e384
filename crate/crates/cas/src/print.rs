//! Canonical text form. Output re-parses to the same expression.

use std::fmt;

use num_traits::{One, Signed};

use crate::expr::{Atom, Expr, Func, Jet, Key, Odd};
use crate::rational::{fmt_q, Q};
use crate::registry;

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field)?;
        if !self.idx.is_empty() {
            write!(f, "_")?;
            for c in &self.idx {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Odd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Odd::Gen(g) => write!(f, "{}", registry::generator_name(*g)),
            Odd::Jet(j) => write!(f, "{j}"),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(s) => write!(f, "{s}"),
            Atom::Jet(j) => write!(f, "{j}"),
            Atom::Func(func, arg) => write!(f, "{func}({arg})"),
            Atom::Base(b) => write!(f, "({b})"),
            Atom::Num(n) => write!(f, "({n})"),
        }
    }
}

fn write_pow(f: &mut fmt::Formatter<'_>, e: &Q) -> fmt::Result {
    if e.is_one() {
        Ok(())
    } else if e.is_integer() && e.is_positive() {
        write!(f, "^{}", e.numer())
    } else {
        write!(f, "^({})", fmt_q(e))
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, k: &Key, c: &Q) -> fmt::Result {
    let mut factors: Vec<String> = Vec::new();
    for o in &k.odd {
        factors.push(o.to_string());
    }
    for (a, e) in &k.mono {
        factors.push(format!("{a}{}", PowFmt(e)));
    }
    if factors.is_empty() {
        return write!(f, "{}", fmt_q(c));
    }
    if !c.is_one() {
        write!(f, "{}*", fmt_q(c))?;
    }
    write!(f, "{}", factors.join("*"))
}

struct PowFmt<'a>(&'a Q);

impl fmt::Display for PowFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pow(f, self.0)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                    write_term(f, k, &-c)?;
                } else {
                    write_term(f, k, c)?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
                write_term(f, k, &-c)?;
            } else {
                write!(f, " + ")?;
                write_term(f, k, c)?;
            }
        }
        Ok(())
    }
}

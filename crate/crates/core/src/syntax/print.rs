//! Printer emitting Krivine-style application `(M)N`.
//!
//! Binder names are generated: the first candidate that is neither free in
//! the printed term nor bound by an enclosing binder. Loose indices (open
//! subterms) print as `#k`.

use std::collections::BTreeSet;

use super::{RawTerm, Var};

const CANDIDATES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

pub(crate) struct Namer {
    free: BTreeSet<String>,
    stack: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    /// Sums allowed bare.
    Top,
    /// Body of `a.`: no bare sums.
    Scale,
    /// Argument slot of an application: only variables, `0` and a trailing λ
    /// are bare.
    Arg,
}

impl Namer {
    pub(crate) fn new(free: BTreeSet<String>) -> Self {
        Namer {
            free,
            stack: Vec::new(),
        }
    }

    pub(crate) fn render(&mut self, t: &RawTerm) -> String {
        let mut out = String::new();
        self.write(t, Ctx::Top, true, &mut out);
        out
    }

    fn fresh(&self) -> String {
        let taken = |n: &str| self.free.contains(n) || self.stack.iter().any(|s| s == n);
        for c in CANDIDATES {
            if !taken(c) {
                return c.to_string();
            }
        }
        (1..)
            .map(|i| format!("x{i}"))
            .find(|n| !taken(n))
            .expect("infinitely many candidates")
    }

    fn var_name(&self, v: &Var) -> String {
        match v {
            Var::Free(n) => n.clone(),
            Var::Bound(k) if *k < self.stack.len() => self.stack[self.stack.len() - 1 - k].clone(),
            Var::Bound(k) => format!("#{}", k - self.stack.len()),
        }
    }

    fn write(&mut self, t: &RawTerm, ctx: Ctx, tail: bool, out: &mut String) {
        match t {
            RawTerm::Var(v) => out.push_str(&self.var_name(v)),
            RawTerm::Zero => out.push('0'),
            RawTerm::Lam(body) => {
                if !tail {
                    return self.parenthesized(t, out);
                }
                let name = self.fresh();
                out.push('λ');
                out.push_str(&name);
                out.push('.');
                self.stack.push(name);
                self.write(body, Ctx::Top, true, out);
                self.stack.pop();
            }
            RawTerm::App(fun, arg) => {
                if ctx == Ctx::Arg {
                    return self.parenthesized(t, out);
                }
                out.push('(');
                self.write(fun, Ctx::Top, true, out);
                out.push(')');
                match **arg {
                    RawTerm::Var(_) | RawTerm::Zero => self.write(arg, Ctx::Arg, tail, out),
                    RawTerm::Lam(_) if tail => self.write(arg, Ctx::Arg, tail, out),
                    _ => self.parenthesized(arg, out),
                }
            }
            RawTerm::Sum(left, right) => {
                if ctx != Ctx::Top {
                    return self.parenthesized(t, out);
                }
                self.write(left, Ctx::Top, false, out);
                out.push_str(" + ");
                if matches!(**right, RawTerm::Sum(..)) {
                    self.parenthesized(right, out);
                } else {
                    self.write(right, Ctx::Top, tail, out);
                }
            }
            RawTerm::Scale(c, body) => {
                if ctx == Ctx::Arg {
                    return self.parenthesized(t, out);
                }
                out.push_str(&c.to_string());
                out.push('.');
                self.write(body, Ctx::Scale, tail, out);
            }
        }
    }

    fn parenthesized(&mut self, t: &RawTerm, out: &mut String) {
        out.push('(');
        self.write(t, Ctx::Top, true, out);
        out.push(')');
    }
}

//! SMT-LIB 2 rendering of constraints and parsing of `get-value` replies.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::kernel::{Term, TermKind, TheoryOp, Var};
use crate::theory::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Logic {
    QfLia,
    QfNia,
}

impl Logic {
    pub fn as_str(self) -> &'static str {
        match self {
            Logic::QfLia => "QF_LIA",
            Logic::QfNia => "QF_NIA",
        }
    }
}

/// One satisfiability query, ready to be sent to a solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmtQuery {
    pub logic: Logic,
    /// `(name, sort)` pairs, sort being `Int` or `Bool`.
    pub declarations: Vec<(String, &'static str)>,
    /// The asserted formula.
    pub assertion: String,
}

impl SmtQuery {
    /// Names to request in `get-value`.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.declarations.iter().map(|(n, _)| n.as_str())
    }
}

/// Maps constraint variables to solver identifiers.
#[derive(Clone, Debug, Default)]
pub struct VarNames {
    to_name: BTreeMap<Var, String>,
}

impl VarNames {
    pub fn for_vars<'a, I: IntoIterator<Item = &'a Var>>(vars: I) -> VarNames {
        let mut to_name = BTreeMap::new();
        for (i, v) in vars.into_iter().enumerate() {
            let clean: String = v.name().chars().filter(|c| *c != '|' && *c != '\\').collect();
            to_name.insert(v.clone(), format!("|{i}:{clean}|"));
        }
        VarNames { to_name }
    }

    pub fn name(&self, v: &Var) -> &str {
        &self.to_name[v]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &String)> {
        self.to_name.iter()
    }

    pub fn lookup(&self, name: &str) -> Option<&Var> {
        self.to_name.iter().find(|(_, n)| n.as_str() == name).map(|(v, _)| v)
    }
}

fn int_literal(n: &BigInt) -> String {
    if n.sign() == num_bigint::Sign::Minus {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

/// Renders a theory term of a theory sort as an SMT-LIB expression.
pub fn render(t: &Term, names: &VarNames) -> String {
    let mut out = String::new();
    write_expr(t, names, &mut out);
    out
}

fn write_expr(t: &Term, names: &VarNames, out: &mut String) {
    match t.kind() {
        TermKind::Var(v) => out.push_str(names.name(v)),
        TermKind::Sym(s) => match s.theory_op() {
            Some(TheoryOp::Int(n)) => out.push_str(&int_literal(n)),
            Some(TheoryOp::True) => out.push_str("true"),
            Some(TheoryOp::False) => out.push_str("false"),
            _ => panic!("not a closed theory expression: {t}"),
        },
        TermKind::App(..) => {
            let op = t
                .head_symbol()
                .and_then(|s| s.theory_op())
                .unwrap_or_else(|| panic!("not a theory term: {t}"));
            let name = match op {
                TheoryOp::Add => "+",
                TheoryOp::Sub => "-",
                TheoryOp::Mul => "*",
                TheoryOp::Div => "div",
                TheoryOp::Mod => "mod",
                TheoryOp::Lt => "<",
                TheoryOp::Le => "<=",
                TheoryOp::Gt => ">",
                TheoryOp::Ge => ">=",
                TheoryOp::Eq(_) => "=",
                TheoryOp::Neq(_) => "distinct",
                TheoryOp::And => "and",
                TheoryOp::Or => "or",
                TheoryOp::Not => "not",
                TheoryOp::Int(_) | TheoryOp::True | TheoryOp::False => {
                    unreachable!("values take no arguments")
                }
            };
            out.push('(');
            out.push_str(name);
            for a in t.args() {
                out.push(' ');
                write_expr(a, names, out);
            }
            out.push(')');
        }
    }
}

/// `QF_NIA` if some product or division has no literal operand.
pub fn logic_for(t: &Term) -> Logic {
    if is_linear(t) {
        Logic::QfLia
    } else {
        Logic::QfNia
    }
}

fn is_linear(t: &Term) -> bool {
    let args = t.args();
    match t.head_symbol().and_then(|s| s.theory_op()) {
        Some(TheoryOp::Mul) if args.len() == 2 => {
            if args[0].as_int().is_none() && args[1].as_int().is_none() {
                return false;
            }
        }
        Some(TheoryOp::Div | TheoryOp::Mod) if args.len() == 2 && args[1].as_int().is_none() => return false,
        _ => {}
    }
    args.into_iter().all(is_linear)
}

/// A parsed S-expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed solver output: {0}")]
pub struct ParseSexpError(pub String);

pub fn parse_sexp(text: &str) -> Result<Sexp, ParseSexpError> {
    let mut chars = text.chars().peekable();
    let s = parse_one(&mut chars)?;
    skip_ws(&mut chars);
    if chars.peek().is_some() {
        return Err(ParseSexpError(format!("trailing input in {text:?}")));
    }
    Ok(s)
}

fn skip_ws(chars: &mut core::iter::Peekable<core::str::Chars<'_>>) {
    while chars.peek().is_some_and(|c| c.is_whitespace()) {
        chars.next();
    }
}

fn parse_one(chars: &mut core::iter::Peekable<core::str::Chars<'_>>) -> Result<Sexp, ParseSexpError> {
    skip_ws(chars);
    match chars.next() {
        None => Err(ParseSexpError("unexpected end of input".into())),
        Some('(') => {
            let mut items = Vec::new();
            loop {
                skip_ws(chars);
                match chars.peek() {
                    None => return Err(ParseSexpError("unbalanced parenthesis".into())),
                    Some(')') => {
                        chars.next();
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_one(chars)?),
                }
            }
        }
        Some(')') => Err(ParseSexpError("unexpected ')'".into())),
        Some('|') => {
            let mut s = String::from("|");
            for c in chars.by_ref() {
                s.push(c);
                if c == '|' {
                    return Ok(Sexp::Atom(s));
                }
            }
            Err(ParseSexpError("unterminated quoted symbol".into()))
        }
        Some(c) => {
            let mut s = String::new();
            s.push(c);
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '(' || c == ')' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            Ok(Sexp::Atom(s))
        }
    }
}

fn parse_value(s: &Sexp) -> Result<Value, ParseSexpError> {
    match s {
        Sexp::Atom(a) if a == "true" => Ok(Value::Bool(true)),
        Sexp::Atom(a) if a == "false" => Ok(Value::Bool(false)),
        Sexp::Atom(a) => a
            .parse::<BigInt>()
            .map(Value::Int)
            .map_err(|_| ParseSexpError(format!("not a value: {a}"))),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(minus), inner] if minus == "-" => match parse_value(inner)? {
                Value::Int(n) => Ok(Value::Int(-n)),
                Value::Bool(_) => Err(ParseSexpError("negated boolean".into())),
            },
            _ => Err(ParseSexpError(format!("unsupported value {s:?}"))),
        },
    }
}

/// Parses a `get-value` reply `((name value) ...)` into a model.
pub fn parse_model(text: &str, names: &VarNames) -> Result<BTreeMap<Var, Value>, ParseSexpError> {
    let mut model = BTreeMap::new();
    let Sexp::List(pairs) = parse_sexp(text)? else {
        return Err(ParseSexpError(format!("expected a list, got {text:?}")));
    };
    for p in &pairs {
        match p {
            Sexp::List(kv) if kv.len() == 2 => {
                let Sexp::Atom(name) = &kv[0] else {
                    return Err(ParseSexpError(format!("bad binding {p:?}")));
                };
                let var = names
                    .lookup(name)
                    .ok_or_else(|| ParseSexpError(format!("unknown identifier {name}")))?;
                model.insert(var.clone(), parse_value(&kv[1])?);
            }
            _ => return Err(ParseSexpError(format!("bad binding {p:?}"))),
        }
    }
    Ok(model)
}

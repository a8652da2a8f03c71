//! Closed-form coordinate expressions.
//!
//! Expressions are parsed once into an immutable tree and evaluated with
//! truncated Taylor arithmetic ([`Jet`], [`Jet2`]), so every derivative used
//! by the geometry layers is exact up to rounding.

mod eval;
mod jet;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use jet::{Jet, Jet2};

/// Names that cannot be used for variables or parameters.
pub const RESERVED: &[&str] = &[
    "sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "abs", "pi", "e",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("function '{name}' at byte {offset} takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("domain error in {op} at byte {offset}: {message}")]
    Domain {
        op: &'static str,
        offset: usize,
        message: String,
    },
    #[error("name '{0}' is declared twice or collides with a builtin")]
    NameClash(String),
    #[error("expression declares {declared} variable(s) but {requested} were supplied")]
    VariableCount { declared: usize, requested: usize },
    #[error("derivative order {0} is not supported (0..=3)")]
    Order(usize),
    #[error("cannot combine expressions over different variable lists")]
    VariableMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Abs,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Num(f64),
    /// `pi` or `e`.
    Constant(&'static str, f64),
    Var(usize),
    /// Parameters are bound when parsed; the name is kept for printing.
    Param(Arc<str>, f64),
    Neg(Box<Node>),
    Binary {
        op: BinOp,
        lhs: Box<Node>,
        rhs: Box<Node>,
        at: usize,
    },
    Pow {
        base: Box<Node>,
        exp: Box<Node>,
        /// Exponent does not reference any variable.
        const_exp: bool,
        at: usize,
    },
    Call {
        func: Func,
        arg: Box<Node>,
        at: usize,
    },
}

impl Node {
    pub(crate) fn has_var(&self) -> bool {
        match self {
            Node::Num(_) | Node::Constant(..) | Node::Param(..) => false,
            Node::Var(_) => true,
            Node::Neg(a) => a.has_var(),
            Node::Binary { lhs, rhs, .. } => lhs.has_var() || rhs.has_var(),
            Node::Pow { base, exp, .. } => base.has_var() || exp.has_var(),
            Node::Call { arg, .. } => arg.has_var(),
        }
    }

    fn substitute(&self, args: &[&Node]) -> Node {
        match self {
            Node::Var(i) => args[*i].clone(),
            Node::Num(_) | Node::Constant(..) | Node::Param(..) => self.clone(),
            Node::Neg(a) => Node::Neg(Box::new(a.substitute(args))),
            Node::Binary { op, lhs, rhs, at } => Node::Binary {
                op: *op,
                lhs: Box::new(lhs.substitute(args)),
                rhs: Box::new(rhs.substitute(args)),
                at: *at,
            },
            Node::Pow { base, exp, at, .. } => {
                let exp = exp.substitute(args);
                Node::Pow {
                    base: Box::new(base.substitute(args)),
                    const_exp: !exp.has_var(),
                    exp: Box::new(exp),
                    at: *at,
                }
            }
            Node::Call { func, arg, at } => Node::Call {
                func: *func,
                arg: Box::new(arg.substitute(args)),
                at: *at,
            },
        }
    }

    fn fmt_with(&self, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => {
                if *v < 0.0 {
                    write!(f, "({v:?})")
                } else {
                    write!(f, "{v:?}")
                }
            }
            Node::Constant(name, _) => f.write_str(name),
            Node::Var(i) => f.write_str(&vars[*i]),
            Node::Param(_, v) => {
                if *v < 0.0 {
                    write!(f, "({v:?})")
                } else {
                    write!(f, "{v:?}")
                }
            }
            Node::Neg(a) => {
                f.write_str("(-")?;
                a.fmt_with(vars, f)?;
                f.write_str(")")
            }
            Node::Binary { op, lhs, rhs, .. } => {
                f.write_str("(")?;
                lhs.fmt_with(vars, f)?;
                write!(f, " {} ", op.symbol())?;
                rhs.fmt_with(vars, f)?;
                f.write_str(")")
            }
            Node::Pow { base, exp, .. } => {
                f.write_str("(")?;
                base.fmt_with(vars, f)?;
                f.write_str("^")?;
                exp.fmt_with(vars, f)?;
                f.write_str(")")
            }
            Node::Call { func, arg, .. } => {
                write!(f, "{}(", func.name())?;
                arg.fmt_with(vars, f)?;
                f.write_str(")")
            }
        }
    }
}

/// A parsed expression over a fixed, ordered list of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Arc<Node>,
    vars: Arc<[String]>,
    source: Arc<str>,
}

impl Expr {
    /// Parses `source` over `variables`, binding every name in `params` to
    /// its value.
    pub fn parse(
        source: &str,
        variables: &[&str],
        params: &BTreeMap<String, f64>,
    ) -> Result<Expr, ExprError> {
        check_names(variables, params)?;
        let root = parse::Parser::new(source, variables, params)?.parse()?;
        Ok(Expr {
            root: Arc::new(root),
            vars: variables.iter().map(|v| v.to_string()).collect(),
            source: source.into(),
        })
    }

    /// Parses an expression with no parameters.
    pub fn parse_in(source: &str, variables: &[&str]) -> Result<Expr, ExprError> {
        Expr::parse(source, variables, &BTreeMap::new())
    }

    pub fn constant(value: f64, variables: &[&str]) -> Expr {
        Expr::from_node(Node::Num(value), variables.iter().map(|v| v.to_string()).collect())
    }

    fn from_node(root: Node, vars: Arc<[String]>) -> Expr {
        let mut expr = Expr {
            root: Arc::new(root),
            vars,
            source: "".into(),
        };
        expr.source = expr.to_string().into();
        expr
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub(crate) fn root(&self) -> &Node {
        &self.root
    }

    /// True when the expression references at least one variable.
    pub fn depends_on_variables(&self) -> bool {
        self.root.has_var()
    }

    /// Replaces variable `i` by `args[i]`. All arguments must share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, args: &[&Expr]) -> Result<Expr, ExprError> {
        if args.len() != self.vars.len() {
            return Err(ExprError::VariableCount {
                declared: self.vars.len(),
                requested: args.len(),
            });
        }
        let vars = match args.first() {
            Some(first) => first.vars.clone(),
            None => self.vars.clone(),
        };
        if args.iter().any(|a| a.vars != vars) {
            return Err(ExprError::VariableMismatch);
        }
        let nodes: Vec<&Node> = args.iter().map(|a| a.root()).collect();
        Ok(Expr::from_node(self.root.substitute(&nodes), vars))
    }

    fn binary(&self, op: BinOp, other: &Expr) -> Result<Expr, ExprError> {
        if self.vars != other.vars {
            return Err(ExprError::VariableMismatch);
        }
        Ok(Expr::from_node(
            Node::Binary {
                op,
                lhs: Box::new((*self.root).clone()),
                rhs: Box::new((*other.root).clone()),
                at: 0,
            },
            self.vars.clone(),
        ))
    }

    pub fn add(&self, other: &Expr) -> Result<Expr, ExprError> {
        self.binary(BinOp::Add, other)
    }

    pub fn sub(&self, other: &Expr) -> Result<Expr, ExprError> {
        self.binary(BinOp::Sub, other)
    }

    pub fn mul(&self, other: &Expr) -> Result<Expr, ExprError> {
        self.binary(BinOp::Mul, other)
    }

    /// `c0 + Σ coef_i · term_i`, skipping zero coefficients.
    pub fn linear_combination(c0: f64, terms: &[(f64, &Expr)]) -> Result<Expr, ExprError> {
        let vars: Arc<[String]> = match terms.first() {
            Some((_, e)) => e.vars.clone(),
            None => Arc::from(Vec::<String>::new()),
        };
        if terms.iter().any(|(_, e)| e.vars != vars) {
            return Err(ExprError::VariableMismatch);
        }
        let mut acc: Option<Node> = (c0 != 0.0).then_some(Node::Num(c0));
        for (coef, term) in terms {
            if *coef == 0.0 {
                continue;
            }
            let scaled = if *coef == 1.0 {
                (*term.root).clone()
            } else {
                Node::Binary {
                    op: BinOp::Mul,
                    lhs: Box::new(Node::Num(*coef)),
                    rhs: Box::new((*term.root).clone()),
                    at: 0,
                }
            };
            acc = Some(match acc {
                None => scaled,
                Some(prev) => Node::Binary {
                    op: BinOp::Add,
                    lhs: Box::new(prev),
                    rhs: Box::new(scaled),
                    at: 0,
                },
            });
        }
        Ok(Expr::from_node(acc.unwrap_or(Node::Num(0.0)), vars))
    }

    /// Plain value at `point` (one coordinate per declared variable).
    pub fn eval(&self, point: &[f64]) -> Result<f64, ExprError> {
        if point.len() != self.vars.len() {
            return Err(ExprError::VariableCount {
                declared: self.vars.len(),
                requested: point.len(),
            });
        }
        eval::eval(&self.root, &|i| point[i], 0)
    }

    /// Value and derivatives up to `order` in the single variable.
    /// Slots above `order` are zero.
    pub fn eval_jet(&self, at: f64, order: usize) -> Result<Jet, ExprError> {
        if order > 3 {
            return Err(ExprError::Order(order));
        }
        if self.vars.len() > 1 {
            return Err(ExprError::VariableCount {
                declared: self.vars.len(),
                requested: 1,
            });
        }
        let seed = Jet::variable(at);
        let jet: Jet = eval::eval(&self.root, &|_| seed, order)?;
        Ok(jet.truncated(order))
    }

    /// Value, first and second partials in the (up to two) variables.
    pub fn eval_jet2(&self, u1: f64, u2: f64) -> Result<Jet2, ExprError> {
        if self.vars.len() > 2 {
            return Err(ExprError::VariableCount {
                declared: self.vars.len(),
                requested: 2,
            });
        }
        let seeds = [Jet2::variable(u1, 0), Jet2::variable(u2, 1)];
        eval::eval(&self.root, &|i| seeds[i], 2)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt_with(&self.vars, f)
    }
}

fn check_names(variables: &[&str], params: &BTreeMap<String, f64>) -> Result<(), ExprError> {
    for (i, v) in variables.iter().enumerate() {
        if RESERVED.contains(v) || variables[..i].contains(v) || params.contains_key(*v) {
            return Err(ExprError::NameClash(v.to_string()));
        }
    }
    if let Some(p) = params.keys().find(|p| RESERVED.contains(&p.as_str())) {
        return Err(ExprError::NameClash(p.clone()));
    }
    Ok(())
}

/// Free-function form of [`Expr::parse`].
pub fn parse(
    source: &str,
    variables: &[&str],
    params: &BTreeMap<String, f64>,
) -> Result<Expr, ExprError> {
    Expr::parse(source, variables, params)
}

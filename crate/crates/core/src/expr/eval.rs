use super::jet::Taylor;
use super::{BinOp, ExprError, Func, Node};

fn domain(op: &'static str, offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Domain {
        op,
        offset,
        message: message.into(),
    }
}

/// Derivatives 0..=3 of `func` at `x`; slots above `order` are zeroed and
/// never need to be finite.
fn elementary(func: Func, x: f64, order: usize, at: usize) -> Result<[f64; 4], ExprError> {
    let name = func.name();
    let d = match func {
        Func::Sin => {
            let (s, c) = x.sin_cos();
            [s, c, -s, -c]
        }
        Func::Cos => {
            let (s, c) = x.sin_cos();
            [c, -s, -c, s]
        }
        Func::Tan => {
            let t = x.tan();
            if !t.is_finite() {
                return Err(domain(name, at, format!("tan undefined at {x}")));
            }
            let sec2 = 1.0 + t * t;
            [t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)]
        }
        Func::Exp => {
            let e = x.exp();
            [e; 4]
        }
        Func::Log => {
            if x <= 0.0 {
                return Err(domain(name, at, format!("log of non-positive {x}")));
            }
            let r = 1.0 / x;
            [x.ln(), r, -r * r, 2.0 * r * r * r]
        }
        Func::Sqrt => {
            if x < 0.0 || (x == 0.0 && order > 0) {
                return Err(domain(name, at, format!("sqrt not differentiable at {x}")));
            }
            let r = x.sqrt();
            if order == 0 {
                [r, 0.0, 0.0, 0.0]
            } else {
                let r3 = r * r * r;
                [r, 0.5 / r, -0.25 / r3, 0.375 / (r3 * r * r)]
            }
        }
        Func::Sinh => {
            let (s, c) = (x.sinh(), x.cosh());
            [s, c, s, c]
        }
        Func::Cosh => {
            let (s, c) = (x.sinh(), x.cosh());
            [c, s, c, s]
        }
        Func::Abs => {
            if x == 0.0 {
                return Err(domain(name, at, "abs is not differentiable at 0"));
            }
            [x.abs(), x.signum(), 0.0, 0.0]
        }
    };
    Ok(mask(d, order))
}

fn mask(mut d: [f64; 4], order: usize) -> [f64; 4] {
    for slot in d.iter_mut().skip(order + 1) {
        *slot = 0.0;
    }
    d
}

fn reciprocal(x: f64, order: usize, at: usize) -> Result<[f64; 4], ExprError> {
    if x == 0.0 {
        return Err(domain("/", at, "division by zero"));
    }
    let r = 1.0 / x;
    let r2 = r * r;
    Ok(mask([r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2], order))
}

/// Derivatives of `x ↦ x^p` for a constant exponent.
fn power(x: f64, p: f64, order: usize, at: usize) -> Result<[f64; 4], ExprError> {
    let integral = p.fract() == 0.0 && p.abs() <= 1024.0;
    if integral {
        let n = p as i32;
        if n < 0 && x == 0.0 {
            return Err(domain("^", at, "zero raised to a negative power"));
        }
        let mut d = [0.0; 4];
        let mut coef = 1.0;
        for (k, slot) in d.iter_mut().enumerate().take(order + 1) {
            if coef != 0.0 {
                *slot = coef * x.powi(n - k as i32);
            }
            coef *= (n - k as i32) as f64;
        }
        return Ok(d);
    }
    if x < 0.0 {
        return Err(domain("^", at, format!("negative base {x} with fractional exponent {p}")));
    }
    if x == 0.0 && p < order as f64 {
        return Err(domain("^", at, format!("0^{p} is not {order} times differentiable")));
    }
    let mut d = [0.0; 4];
    let mut coef = 1.0;
    for (k, slot) in d.iter_mut().enumerate().take(order + 1) {
        *slot = coef * x.powf(p - k as f64);
        coef *= p - k as f64;
    }
    Ok(d)
}

pub(super) fn eval<T: Taylor>(
    node: &Node,
    var: &dyn Fn(usize) -> T,
    order: usize,
) -> Result<T, ExprError> {
    Ok(match node {
        Node::Num(v) | Node::Constant(_, v) | Node::Param(_, v) => T::constant(*v),
        Node::Var(i) => var(*i),
        Node::Neg(a) => -eval(a, var, order)?,
        Node::Binary { op, lhs, rhs, at } => {
            let a = eval(lhs, var, order)?;
            let b = eval(rhs, var, order)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a * b.chain(reciprocal(b.value(), order, *at)?),
            }
        }
        Node::Pow {
            base,
            exp,
            const_exp,
            at,
        } => {
            let b = eval(base, var, order)?;
            if *const_exp {
                let p = eval::<f64>(exp, &|_| 0.0, 0)?;
                b.chain(power(b.value(), p, order, *at)?)
            } else {
                let e = eval(exp, var, order)?;
                if b.value() <= 0.0 {
                    return Err(domain(
                        "^",
                        *at,
                        format!("variable exponent needs a positive base, got {}", b.value()),
                    ));
                }
                let ln_b = b.chain(elementary(Func::Log, b.value(), order, *at)?);
                let prod = e * ln_b;
                let ev = prod.value().exp();
                prod.chain(mask([ev; 4], order))
            }
        }
        Node::Call { func, arg, at } => {
            let a = eval(arg, var, order)?;
            a.chain(elementary(*func, a.value(), order, *at)?)
        }
    })
}

use super::{FunctionTerm, TermError};

pub const BUILTIN_NAMES: &[&str] = &[
    "add", "mul", "sub", "abs_diff", "min", "max", "sgn", "gt", "div", "pow", "factorial",
    "ackermann",
];

fn p(n: usize, i: usize) -> FunctionTerm {
    FunctionTerm::proj(n, i).expect("catalog projections are well formed")
}

fn c(g: FunctionTerm, hs: Vec<FunctionTerm>) -> FunctionTerm {
    FunctionTerm::compose(g, hs).expect("catalog compositions are well formed")
}

fn one() -> FunctionTerm {
    FunctionTerm::constant(1u32)
}

fn sgn() -> FunctionTerm {
    let def = c(
        FunctionTerm::sub(),
        vec![one(), c(FunctionTerm::sub(), vec![one(), p(1, 1)])],
    );
    FunctionTerm::named("sgn", def)
}

fn abs_diff() -> FunctionTerm {
    let def = c(
        FunctionTerm::add(),
        vec![
            FunctionTerm::sub(),
            c(FunctionTerm::sub(), vec![p(2, 2), p(2, 1)]),
        ],
    );
    FunctionTerm::named("abs_diff", def)
}

fn min() -> FunctionTerm {
    let def = c(FunctionTerm::sub(), vec![p(2, 1), FunctionTerm::sub()]);
    FunctionTerm::named("min", def)
}

fn max() -> FunctionTerm {
    let def = c(FunctionTerm::add(), vec![p(2, 2), FunctionTerm::sub()]);
    FunctionTerm::named("max", def)
}

fn gt() -> FunctionTerm {
    FunctionTerm::named("gt", c(sgn(), vec![FunctionTerm::sub()]))
}

/// `div(x, y) = floor(x / (y + 1))`, counted as `#{t ≤ x : t(y+1) ≤ x} - 1`.
fn div() -> FunctionTerm {
    let indicator = c(
        sgn(),
        vec![c(
            FunctionTerm::sub(),
            vec![
                c(FunctionTerm::succ(), vec![p(3, 2)]),
                c(
                    FunctionTerm::mul(),
                    vec![p(3, 1), c(FunctionTerm::succ(), vec![p(3, 3)])],
                ),
            ],
        )],
    );
    let count = FunctionTerm::bounded_sum(indicator).expect("indicator has arity 3");
    let def = c(
        FunctionTerm::sub(),
        vec![c(count, vec![p(2, 1), p(2, 1), p(2, 2)]), one()],
    );
    FunctionTerm::named("div", def)
}

/// `pow(x, y) = x^y` as `Π_{t ≤ y} (t = 0 ? 1 : x)`.
fn pow() -> FunctionTerm {
    let factor = c(
        FunctionTerm::add(),
        vec![
            c(FunctionTerm::mul(), vec![c(sgn(), vec![p(2, 1)]), p(2, 2)]),
            c(FunctionTerm::sub(), vec![one(), c(sgn(), vec![p(2, 1)])]),
        ],
    );
    let prod = FunctionTerm::bounded_prod(factor).expect("factor has arity 2");
    FunctionTerm::named("pow", c(prod, vec![p(2, 2), p(2, 1)]))
}

/// `0! = 1`, `(n+1)! = mul(S(n), n!)`.
fn factorial() -> FunctionTerm {
    let step = c(
        FunctionTerm::mul(),
        vec![c(FunctionTerm::succ(), vec![p(2, 1)]), p(2, 2)],
    );
    let def = FunctionTerm::primrec(one(), step).expect("step has arity 2");
    FunctionTerm::named("factorial", def)
}

/// Looks up a catalog function by name.
pub fn builtin(name: &str) -> Result<FunctionTerm, TermError> {
    Ok(match name {
        "add" => FunctionTerm::add(),
        "mul" => FunctionTerm::mul(),
        "sub" => FunctionTerm::sub(),
        "abs_diff" => abs_diff(),
        "min" => min(),
        "max" => max(),
        "sgn" => sgn(),
        "gt" => gt(),
        "div" => div(),
        "pow" => pow(),
        "factorial" => factorial(),
        "ackermann" => FunctionTerm::ackermann(),
        _ => {
            if let Some(level) = name
                .strip_prefix("ladder(")
                .and_then(|rest| rest.strip_suffix(')'))
                .and_then(|n| n.trim().parse::<u32>().ok())
            {
                return Ok(FunctionTerm::ladder(level));
            }
            return Err(TermError::UnknownName(name.to_string()));
        }
    })
}

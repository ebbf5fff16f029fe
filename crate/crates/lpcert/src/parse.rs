//! Text formats: the LP file grammar plus matrix and vector files.
//!
//! LP files are UTF-8, line oriented:
//!
//! ```text
//! # comment
//! vars <n>
//! min <r_1> ... <r_n>
//! eq <a_1> ... <a_n> = <b>
//! ge <a_1> ... <a_n> >= <b>
//! ```
//!
//! Rationals use the literal syntax `[-]p[/q]` with no decimals. Equality
//! rows must precede inequality rows; constraint indices are assigned in file
//! order.

use crate::error::Error;
use crate::linalg::{Matrix, Vector};
use crate::model::MixedLp;
use crate::rational::Rational;

/// Parse result: the LP plus warning-level diagnostics (zero objective or
/// zero constraint matrix violate the usual assumptions but are accepted).
#[derive(Clone, Debug)]
pub struct ParsedLp {
    pub lp: MixedLp,
    pub warnings: Vec<String>,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>, // (1-based column, token)
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = line
                .split_whitespace()
                .map(|tok| {
                    let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
                    (col, tok)
                })
                .collect();
            if tokens.is_empty() {
                None
            } else {
                Some(Line {
                    number: idx + 1,
                    tokens,
                })
            }
        })
        .collect()
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn rational_at(line: usize, (col, tok): (usize, &str)) -> Result<Rational, Error> {
    tok.parse::<Rational>()
        .map_err(|e| parse_err(line, col, e.to_string()))
}

pub fn parse_lp(text: &str) -> Result<ParsedLp, Error> {
    let lines = tokenize(text);
    let mut iter = lines.iter();

    let header = iter
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty file: expected `vars <n>`"))?;
    if header.tokens[0].1 != "vars" || header.tokens.len() != 2 {
        return Err(parse_err(
            header.number,
            header.tokens[0].0,
            "expected `vars <n>`",
        ));
    }
    let n: usize = header.tokens[1].1.parse().map_err(|_| {
        parse_err(
            header.number,
            header.tokens[1].0,
            "variable count must be a positive integer",
        )
    })?;
    if n == 0 {
        return Err(parse_err(
            header.number,
            header.tokens[1].0,
            "variable count must be positive",
        ));
    }

    let obj_line = iter
        .next()
        .ok_or_else(|| parse_err(header.number + 1, 1, "expected `min <r_1> ... <r_n>`"))?;
    if obj_line.tokens[0].1 != "min" {
        return Err(parse_err(
            obj_line.number,
            obj_line.tokens[0].0,
            "expected `min <r_1> ... <r_n>`",
        ));
    }
    if obj_line.tokens.len() != n + 1 {
        return Err(Error::RowArity {
            line: obj_line.number,
            expected: n,
            found: obj_line.tokens.len() - 1,
        });
    }
    let cost: Vector = obj_line.tokens[1..]
        .iter()
        .map(|&t| rational_at(obj_line.number, t))
        .collect::<Result<_, _>>()?;

    let mut eq_rows: Vec<Vec<Rational>> = Vec::new();
    let mut eq_rhs: Vector = Vec::new();
    let mut ge_rows: Vec<Vec<Rational>> = Vec::new();
    let mut ge_rhs: Vector = Vec::new();

    for line in iter {
        let (kw_col, kw) = line.tokens[0];
        let (sep, is_eq) = match kw {
            "eq" => ("=", true),
            "ge" => (">=", false),
            other => {
                return Err(parse_err(
                    line.number,
                    kw_col,
                    format!("expected `eq` or `ge`, found {other:?}"),
                ))
            }
        };
        if is_eq && !ge_rows.is_empty() {
            return Err(parse_err(
                line.number,
                kw_col,
                "equality rows must precede inequality rows",
            ));
        }
        // Layout: kw, n coefficients, separator, rhs.
        if line.tokens.len() != n + 3 {
            let found = line.tokens.len().saturating_sub(3);
            return Err(Error::RowArity {
                line: line.number,
                expected: n,
                found,
            });
        }
        let coeffs: Vec<Rational> = line.tokens[1..=n]
            .iter()
            .map(|&t| rational_at(line.number, t))
            .collect::<Result<_, _>>()?;
        let (sep_col, sep_tok) = line.tokens[n + 1];
        if sep_tok != sep {
            return Err(parse_err(
                line.number,
                sep_col,
                format!("expected {sep:?} before the right-hand side"),
            ));
        }
        let rhs = rational_at(line.number, line.tokens[n + 2])?;
        if is_eq {
            eq_rows.push(coeffs);
            eq_rhs.push(rhs);
        } else {
            ge_rows.push(coeffs);
            ge_rhs.push(rhs);
        }
    }

    let m_eq = eq_rows.len();
    let m_ineq = ge_rows.len();
    let a_eq = if m_eq == 0 {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(eq_rows)
    };
    let a_ineq = if m_ineq == 0 {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(ge_rows)
    };
    let lp = MixedLp::new(a_eq, eq_rhs, a_ineq, ge_rhs, cost)?;

    let mut warnings = Vec::new();
    if lp.cost().iter().all(Rational::is_zero) {
        warnings.push("objective vector is zero; any feasible point is optimal".to_string());
    }
    if lp.m() == 0 {
        warnings.push("no constraints given".to_string());
    } else if (1..=lp.m()).all(|i| lp.row(i).iter().all(Rational::is_zero)) {
        warnings.push("constraint matrix is zero".to_string());
    }
    Ok(ParsedLp { lp, warnings })
}

/// Matrix file: header `rows <r> cols <n>`, then r lines of n rationals.
pub fn parse_matrix(text: &str) -> Result<Matrix, Error> {
    let lines = tokenize(text);
    let mut iter = lines.iter();
    let header = iter
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty file: expected `rows <r> cols <n>`"))?;
    let toks = &header.tokens;
    if toks.len() != 4 || toks[0].1 != "rows" || toks[2].1 != "cols" {
        return Err(parse_err(
            header.number,
            toks[0].0,
            "expected `rows <r> cols <n>`",
        ));
    }
    let rows: usize = toks[1]
        .1
        .parse()
        .map_err(|_| parse_err(header.number, toks[1].0, "bad row count"))?;
    let cols: usize = toks[3]
        .1
        .parse()
        .map_err(|_| parse_err(header.number, toks[3].0, "bad column count"))?;
    let mut data: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for line in iter {
        if line.tokens.len() != cols {
            return Err(Error::RowArity {
                line: line.number,
                expected: cols,
                found: line.tokens.len(),
            });
        }
        data.push(
            line.tokens
                .iter()
                .map(|&t| rational_at(line.number, t))
                .collect::<Result<_, _>>()?,
        );
    }
    if data.len() != rows {
        return Err(Error::Dimension(format!(
            "matrix file declares {rows} rows but has {}",
            data.len()
        )));
    }
    if rows == 0 {
        return Ok(Matrix::zeros(0, cols));
    }
    Ok(Matrix::from_rows(data))
}

/// Vector file: whitespace-separated rationals; `#` comments allowed.
pub fn parse_vector(text: &str) -> Result<Vector, Error> {
    let mut out = Vector::new();
    for line in tokenize(text) {
        for &tok in &line.tokens {
            out.push(rational_at(line.number, tok)?);
        }
    }
    Ok(out)
}

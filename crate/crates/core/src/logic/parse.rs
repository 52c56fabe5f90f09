//! Prefix syntax:
//!
//! ```text
//! true | false | (= i j) | (E i j) | (not φ) | (and φ ...) | (or φ ...)
//! (exists>= t l φ) | (exists= t l φ)
//! ```

use super::formula::{Formula, F};
use crate::error::{Error, Result};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        msg: msg.into(),
    }
}

fn tokens(s: &str) -> Vec<String> {
    s.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

struct P {
    toks: Vec<String>,
    at: usize,
}

impl P {
    fn next(&mut self) -> Result<String> {
        let t = self
            .toks
            .get(self.at)
            .cloned()
            .ok_or_else(|| err("unexpected end of formula"))?;
        self.at += 1;
        Ok(t)
    }

    fn num(&mut self) -> Result<usize> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| err(format!("expected a number, found {t:?}")))
    }

    fn close(&mut self) -> Result<()> {
        match self.next()?.as_str() {
            ")" => Ok(()),
            t => Err(err(format!("expected ')', found {t:?}"))),
        }
    }

    fn formula(&mut self) -> Result<F> {
        let t = self.next()?;
        match t.as_str() {
            "true" => return Ok(Formula::top()),
            "false" => return Ok(Formula::bot()),
            "(" => {}
            _ => return Err(err(format!("unexpected {t:?}"))),
        }
        let head = self.next()?;
        let f = match head.as_str() {
            "=" | "E" => {
                let (i, j) = (self.num()?, self.num()?);
                if i == 0 || j == 0 {
                    return Err(err("variables are numbered from 1"));
                }
                if head == "=" {
                    Formula::eq(i, j)
                } else {
                    Formula::edge(i, j)
                }
            }
            "not" => Formula::not(self.formula()?),
            "and" | "or" => {
                let mut parts = Vec::new();
                while self.toks.get(self.at).map(String::as_str) != Some(")") {
                    parts.push(self.formula()?);
                }
                if head == "and" {
                    Formula::and(parts)
                } else {
                    Formula::or(parts)
                }
            }
            "exists>=" | "exists=" => {
                let (t, l) = (self.num()?, self.num()?);
                if l == 0 {
                    return Err(err("variables are numbered from 1"));
                }
                let body = self.formula()?;
                if head == "exists>=" {
                    if t == 0 {
                        return Err(err("counting quantifiers need t >= 1"));
                    }
                    Formula::exists(t, l, body)
                } else if t == 0 {
                    Formula::not(Formula::exists(1, l, body))
                } else {
                    Formula::exists_exactly(t, l, body)
                }
            }
            h => return Err(err(format!("unknown connective {h:?}"))),
        };
        self.close()?;
        Ok(f)
    }
}

pub fn parse_formula(s: &str) -> Result<F> {
    let mut p = P {
        toks: tokens(s),
        at: 0,
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return Err(err("trailing input after formula"));
    }
    Ok(f)
}

//! Element syntax: rational expressions over the backend's variable names with
//! `+ - * / ^`, parentheses and integer literals, e.g. `(1+w)/2`, `X^2*Y/(X-Y)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{Domain, DomainError, KElem};
use crate::exact::MultiPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '†' || c == '$'
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, DomainError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Num(s.parse().unwrap())));
        } else if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i].1) {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Name(s)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(DomainError::Parse {
                pos,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

/// Rational function `num / den` during parsing.
#[derive(Clone)]
struct Frac {
    num: MultiPoly,
    den: MultiPoly,
}

impl Frac {
    fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            return Frac {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        Frac {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }
    fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    names: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DomainError> {
        Err(DomainError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Frac, DomainError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Frac, DomainError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                if d.num.is_zero() {
                    return Err(DomainError::Parse {
                        pos,
                        msg: "division by zero".into(),
                    });
                }
                acc = acc.mul(&Frac {
                    num: d.den,
                    den: d.num,
                });
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Frac, DomainError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac, DomainError> {
        let base = self.atom()?;
        if self.eat('^') {
            let Some(Tok::Num(k)) = self.peek().cloned() else {
                return self.err("expected a non-negative integer exponent");
            };
            self.at += 1;
            let k: u32 = k.try_into().map_err(|_| DomainError::Parse {
                pos: self.pos(),
                msg: "exponent too large".into(),
            })?;
            return Ok(Frac {
                num: base.num.pow(k),
                den: base.den.pow(k),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac, DomainError> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Frac {
                    num: MultiPoly::constant(n, BigRational::from_integer(v)),
                    den: MultiPoly::one(n),
                })
            }
            Some(Tok::Name(s)) => {
                let Some(i) = self.names.iter().position(|x| *x == s) else {
                    return self.err(format!("unknown variable '{s}'"));
                };
                self.at += 1;
                Ok(Frac {
                    num: MultiPoly::var(n, i),
                    den: MultiPoly::one(n),
                })
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_frac(text: &str, names: &[String]) -> Result<Frac, DomainError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        names,
        end: text.len(),
    };
    let f = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses `num / den` over `names`, both polynomials.
pub(crate) fn parse_fraction(text: &str, names: &[String]) -> Result<(MultiPoly, MultiPoly), DomainError> {
    let f = parse_frac(text, names)?;
    Ok((f.num, f.den))
}

/// Parses a polynomial over `names`; a constant denominator is allowed.
pub fn parse_poly(text: &str, names: &[String]) -> Result<MultiPoly, DomainError> {
    let f = parse_frac(text, names)?;
    if !f.den.is_constant() {
        return Err(DomainError::Parse {
            pos: 0,
            msg: format!("'{text}' is not a polynomial"),
        });
    }
    Ok(f.num.scale(&f.den.constant_term().recip()))
}

/// Least common multiple of the coefficient denominators of `p`.
pub(crate) fn coeff_denominator(p: &MultiPoly) -> BigInt {
    p.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()))
}

/// Parses an element of the quotient field of `domain`.
pub fn parse_element(domain: &Domain, text: &str) -> Result<KElem, DomainError> {
    let f = parse_frac(text, domain.var_names())?;
    let (mut num, mut den) = (domain.reduce(&f.num), domain.reduce(&f.den));
    if den.is_zero() {
        return Err(DomainError::Zero);
    }
    if !domain.is_poly() {
        // clear rational coefficients into the denominator
        let l = coeff_denominator(&num).lcm(&coeff_denominator(&den));
        let lq = BigRational::from_integer(l);
        num = num.scale(&lq);
        den = den.scale(&lq);
    }
    domain.k(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Center;

    #[test]
    fn parses_polynomials() {
        let names = vec!["X".to_string(), "Y".to_string()];
        let p = parse_poly("X^2 - 2*X*Y + Y^2", &names).unwrap();
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        assert_eq!(p, (&x - &y).pow(2));
        assert_eq!(parse_poly("X/2", &names).unwrap(), x.scale(&BigRational::new(1.into(), 2.into())));
        assert!(parse_poly("1/X", &names).is_err());
        assert!(matches!(parse_poly("X + Z", &names), Err(DomainError::Parse { pos: 4, .. })));
        assert!(matches!(parse_poly("(X", &names), Err(DomainError::Parse { .. })));
    }

    #[test]
    fn parses_quadratic_fractions() {
        let d = Domain::quadratic((-3).into()).unwrap();
        let z = parse_element(&d, "(1+w)/2").unwrap();
        assert_eq!(z.den, d.int(2));
        assert!(!d.k_in_d(&z));
        let u = parse_element(&d, "w*w").unwrap();
        assert_eq!(u.num, d.int(-3));
    }

    #[test]
    fn parses_local_fractions() {
        let d = Domain::poly(vec!["X".into(), "Y".into()], Center::Origin).unwrap();
        let z = parse_element(&d, "X^3/Y").unwrap();
        assert_eq!(d.show_k(&z), "X^3/Y");
    }
}

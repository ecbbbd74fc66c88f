//! Exact polynomial input such as `x1^20*x2 - 3/2*x2^2`.

use emlattice::euler_maclaurin::Polynomial;
use emlattice::germ::MultiIndex;
use emlattice::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CliError, CliResult};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> CliError {
        CliError::Parse(format!("polynomial syntax error at column {}: {msg}", self.pos + 1))
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> CliResult<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn small(&mut self, what: &str, max: usize) -> CliResult<usize> {
        let start = self.pos;
        let n = self.integer()?;
        usize::try_from(&n).ok().filter(|&k| k <= max).ok_or_else(|| {
            self.pos = start;
            self.error(&format!("{what} {n} out of range"))
        })
    }

    fn rational(&mut self) -> CliResult<Rational> {
        let p = self.integer()?;
        if self.eat(b'/') {
            let at = self.pos;
            let q = self.integer()?;
            if q.is_zero() {
                self.pos = at;
                return Err(self.error("zero denominator"));
            }
            return Ok(Rational::new(p, q));
        }
        Ok(Rational::from_integer(p))
    }

    fn factor(&mut self, e: &mut [usize]) -> CliResult<()> {
        if !self.eat(b'x') {
            return Err(self.error("expected a variable x1, x2, ..."));
        }
        let at = self.pos;
        let k = self.small("variable index", usize::MAX)?;
        if k == 0 || k > self.dim {
            self.pos = at;
            return Err(self.error(&format!("variable x{k} does not exist in dimension {}", self.dim)));
        }
        let p = if self.eat(b'^') { self.small("exponent", u16::MAX as usize)? } else { 1 };
        e[k - 1] += p;
        if e[k - 1] > u16::MAX as usize {
            return Err(self.error("exponent too large"));
        }
        Ok(())
    }

    fn term(&mut self) -> CliResult<(MultiIndex, Rational)> {
        let mut e = vec![0; self.dim];
        let mut c = Rational::one();
        let starts_with_number = matches!(self.peek(), Some(b'0'..=b'9'));
        if starts_with_number {
            c = self.rational()?;
            if !self.eat(b'*') {
                return Ok((MultiIndex::from_slice(&e), c));
            }
        }
        self.factor(&mut e)?;
        while self.eat(b'*') {
            self.factor(&mut e)?;
        }
        Ok((MultiIndex::from_slice(&e), c))
    }
}

/// Parses `term (('+'|'-') term)*` where a term is `[rational '*'] factor ('*' factor)*`
/// or a bare rational, and a factor is `xk` or `xk^e`. Whitespace is ignored.
pub fn parse_polynomial(src: &str, dim: usize) -> CliResult<Polynomial> {
    if dim > emlattice::germ::MAX_VARS {
        return Err(CliError::Usage(format!("dimension {dim} exceeds {}", emlattice::germ::MAX_VARS)));
    }
    let mut p = Parser { src: src.as_bytes(), pos: 0, dim };
    let mut out = Polynomial::zero(dim);
    let mut negate = if p.eat(b'-') {
        true
    } else {
        p.eat(b'+');
        false
    };
    loop {
        let (e, c) = p.term()?;
        out.add_term(e, if negate { -c } else { c });
        match p.peek() {
            None => return Ok(out),
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(_) => return Err(p.error("expected '+', '-' or '*'")),
        }
        p.pos += 1;
    }
}

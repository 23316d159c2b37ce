use levelpath::Complex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid complex literal {text:?}: expected A, Bi, A+Bi, A-Bi, i or -i without spaces")]
pub struct FormatError {
    pub text: String,
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Scanner<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn sign(&mut self) -> Option<f64> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(1.0)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// An unsigned decimal literal with optional fraction and exponent.
    fn decimal(&mut self) -> Option<f64> {
        let start = self.pos;
        let mut count = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            count += self.digits();
        }
        if count == 0 {
            self.pos = start;
            return None;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            self.sign();
            if self.digits() == 0 {
                self.pos = mark;
            }
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    fn imaginary_unit(&mut self) -> bool {
        if self.peek() == Some(b'i') {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

/// Parses `A`, `Bi`, `A+Bi`, `A-Bi`, `i` or `-i` where `A` and `B` are
/// decimal literals. `A` may carry a sign; `B` may be omitted (`1+i`).
pub fn parse_complex_literal(text: &str) -> Result<Complex, FormatError> {
    let fail = || FormatError {
        text: text.to_string(),
    };
    let mut sc = Scanner {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let sign = sc.sign().unwrap_or(1.0);
    let first = sc.decimal();
    if sc.imaginary_unit() {
        return if sc.done() {
            Ok(Complex::new(0.0, sign * first.unwrap_or(1.0)))
        } else {
            Err(fail())
        };
    }
    let re = sign * first.ok_or_else(fail)?;
    if sc.done() {
        return Ok(Complex::new(re, 0.0));
    }
    let im_sign = sc.sign().ok_or_else(fail)?;
    let im = sc.decimal().unwrap_or(1.0);
    if sc.imaginary_unit() && sc.done() {
        Ok(Complex::new(re, im_sign * im))
    } else {
        Err(fail())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(text: &str) -> (f64, f64) {
        let z = parse_complex_literal(text).unwrap();
        (z.re, z.im)
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(ok("1.5+0.5i"), (1.5, 0.5));
        assert_eq!(ok("-i"), (0.0, -1.0));
        assert_eq!(ok("i"), (0.0, 1.0));
        assert_eq!(ok("+i"), (0.0, 1.0));
        assert_eq!(ok("2"), (2.0, 0.0));
        assert_eq!(ok("-0.25"), (-0.25, 0.0));
        assert_eq!(ok("3i"), (0.0, 3.0));
        assert_eq!(ok("-2.5i"), (0.0, -2.5));
        assert_eq!(ok("1-2i"), (1.0, -2.0));
        assert_eq!(ok("1+i"), (1.0, 1.0));
        assert_eq!(ok("1e-3-2E2i"), (1e-3, -200.0));
        assert_eq!(ok(".5"), (0.5, 0.0));
    }

    #[test]
    fn rejected_forms() {
        for bad in [
            "1.5 + 0.5i",
            " 1",
            "1 ",
            "",
            "-",
            "+",
            "1+",
            "1+2",
            "i1",
            "1+2j",
            "2ii",
            "1e",
            "abc",
            "1++2i",
            ".",
        ] {
            assert_eq!(
                parse_complex_literal(bad),
                Err(FormatError {
                    text: bad.to_string()
                }),
                "{bad:?}"
            );
        }
    }
}

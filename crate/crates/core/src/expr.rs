//! Expressions in the single variable `z`.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' '-'? INT)?
//! atom   := NUMBER | 'i' | 'z' | NAME '(' expr ')' | '(' expr ')'
//! NAME   := exp | log | sin | cos | tan | sinh | cosh | tanh
//! ```
//!
//! `^` binds tighter than unary minus, so `-z^2` is `-(z^2)`. The exponent
//! must be an integer literal. There is no implicit multiplication: `2z` and
//! `2i` are rejected, write `2*z` and `2*i`.

use std::fmt;

use thiserror::Error;

use crate::complexjet::{
    complex_div, complex_powi, finite, Complex, Elementary, Jet2, JetError, I,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected character {found:?} at offset {position}")]
    Lex { position: usize, found: char },
    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error(transparent)]
    Eval(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Character offset into the source.
    pub position: usize,
}

fn is_known_ident(word: &str) -> bool {
    word == "z" || word == "i" || Elementary::from_name(word).is_some()
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let ch = chars[pos];
        if ch.is_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let kind = match ch {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = kind {
            pos += 1;
            tokens.push(Token {
                kind,
                text: ch.to_string(),
                position: start,
            });
            continue;
        }
        if ch.is_ascii_digit()
            || (ch == '.' && chars.get(pos + 1).is_some_and(|c| c.is_ascii_digit()))
        {
            pos = scan_number(&chars, pos);
            tokens.push(Token {
                kind: TokenKind::Number,
                text: chars[start..pos].iter().collect(),
                position: start,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            while pos < chars.len() && chars[pos].is_ascii_alphabetic() {
                pos += 1;
            }
            let word: String = chars[start..pos].iter().collect();
            if !is_known_ident(&word) {
                return Err(ExprError::Lex {
                    position: start,
                    found: ch,
                });
            }
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: word,
                position: start,
            });
            continue;
        }
        return Err(ExprError::Lex {
            position: start,
            found: ch,
        });
    }
    Ok(tokens)
}

/// Returns the end offset of the decimal literal starting at `pos`.
fn scan_number(chars: &[char], mut pos: usize) -> usize {
    let digits = |mut p: usize| {
        while p < chars.len() && chars[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    pos = digits(pos);
    if pos < chars.len() && chars[pos] == '.' {
        pos = digits(pos + 1);
    }
    if pos < chars.len() && (chars[pos] == 'e' || chars[pos] == 'E') {
        let mut p = pos + 1;
        if p < chars.len() && (chars[p] == '+' || chars[p] == '-') {
            p += 1;
        }
        if p < chars.len() && chars[p].is_ascii_digit() {
            pos = digits(p);
        }
    }
    pos
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Const(Complex),
    Var,
    Neg(Box<ExprNode>),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    PowInt(Box<ExprNode>, i32),
    Call(Elementary, Box<ExprNode>),
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.position)
    }

    fn error(&self, expected: &str) -> ExprError {
        ExprError::Parse {
            position: self.offset(),
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<&'a Token, ExprError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Plus) => {
                    self.pos += 1;
                    lhs = ExprNode::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(TokenKind::Minus) => {
                    self.pos += 1;
                    lhs = ExprNode::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Star) => {
                    self.pos += 1;
                    lhs = ExprNode::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(TokenKind::Slash) => {
                    self.pos += 1;
                    lhs = ExprNode::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprNode, ExprError> {
        if self.peek_kind() == Some(TokenKind::Minus) {
            self.pos += 1;
            return Ok(ExprNode::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek_kind() != Some(TokenKind::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek_kind() == Some(TokenKind::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.offset();
        let tok = self.expect(TokenKind::Number, "integer exponent")?;
        let magnitude: i64 = match tok.text.parse() {
            Ok(v) => v,
            Err(_) => {
                return Err(ExprError::Parse {
                    position: at,
                    expected: "integer exponent".into(),
                });
            }
        };
        let n = if negative { -magnitude } else { magnitude };
        let n = i32::try_from(n).map_err(|_| ExprError::Parse {
            position: at,
            expected: "exponent within 32-bit range".into(),
        })?;
        Ok(ExprNode::PowInt(Box::new(base), n))
    }

    fn atom(&mut self) -> Result<ExprNode, ExprError> {
        const EXPECTED: &str = "number, 'z', 'i', function call or '('";
        let Some(tok) = self.peek() else {
            return Err(self.error(EXPECTED));
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let value: f64 = tok.text.parse().map_err(|_| ExprError::Parse {
                    position: tok.position,
                    expected: "decimal literal".into(),
                })?;
                Ok(ExprNode::Const(Complex::new(value, 0.0)))
            }
            TokenKind::Ident => {
                self.pos += 1;
                match tok.text.as_str() {
                    "z" => Ok(ExprNode::Var),
                    "i" => Ok(ExprNode::Const(I)),
                    name => {
                        // the lexer only admits z, i and known function names
                        let func = Elementary::from_name(name).ok_or_else(|| ExprError::Parse {
                            position: tok.position,
                            expected: EXPECTED.into(),
                        })?;
                        self.expect(TokenKind::LParen, "'('")?;
                        let arg = self.expr()?;
                        self.expect(TokenKind::RParen, "')'")?;
                        Ok(ExprNode::Call(func, Box::new(arg)))
                    }
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}

pub fn parse(tokens: &[Token]) -> Result<ExprNode, ExprError> {
    let end = tokens
        .last()
        .map_or(0, |t| t.position + t.text.chars().count());
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
    };
    let node = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(parser.error("operator or end of input"));
    }
    Ok(node)
}

impl std::str::FromStr for ExprNode {
    type Err = ExprError;

    fn from_str(source: &str) -> Result<Self, Self::Err> {
        parse(&tokenize(source)?)
    }
}

impl ExprNode {
    pub fn eval_complex(&self, z: Complex) -> Result<Complex, JetError> {
        Ok(match self {
            ExprNode::Const(c) => *c,
            ExprNode::Var => z,
            ExprNode::Neg(a) => -a.eval_complex(z)?,
            ExprNode::Add(a, b) => finite(a.eval_complex(z)? + b.eval_complex(z)?)?,
            ExprNode::Sub(a, b) => finite(a.eval_complex(z)? - b.eval_complex(z)?)?,
            ExprNode::Mul(a, b) => finite(a.eval_complex(z)? * b.eval_complex(z)?)?,
            ExprNode::Div(a, b) => complex_div(a.eval_complex(z)?, b.eval_complex(z)?)?,
            ExprNode::PowInt(a, n) => complex_powi(a.eval_complex(z)?, *n)?,
            ExprNode::Call(f, a) => f.apply(a.eval_complex(z)?)?,
        })
    }

    /// Evaluates over jets seeded with `(z, 1, 0)`, giving `(f(z), f'(z), f''(z))`.
    pub fn eval_jet(&self, z: Complex) -> Result<Jet2, JetError> {
        self.jet_at(Jet2::variable(z))
    }

    fn jet_at(&self, var: Jet2) -> Result<Jet2, JetError> {
        match self {
            ExprNode::Const(c) => Ok(Jet2::constant(*c)),
            ExprNode::Var => Ok(var),
            ExprNode::Neg(a) => Ok(a.jet_at(var)?.neg()),
            ExprNode::Add(a, b) => a.jet_at(var)?.add(b.jet_at(var)?),
            ExprNode::Sub(a, b) => a.jet_at(var)?.sub(b.jet_at(var)?),
            ExprNode::Mul(a, b) => a.jet_at(var)?.mul(b.jet_at(var)?),
            ExprNode::Div(a, b) => a.jet_at(var)?.div(b.jet_at(var)?),
            ExprNode::PowInt(a, n) => a.jet_at(var)?.powi(*n),
            ExprNode::Call(f, a) => a.jet_at(var)?.elementary(*f),
        }
    }

    /// Canonical fully-parenthesized rendering.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Const(c) if *c == I => write!(f, "i"),
            ExprNode::Const(c) if c.im == 0.0 && c.re.is_sign_positive() => write!(f, "{}", c.re),
            // not producible by the parser; rendered as an equivalent expression
            ExprNode::Const(c) => write!(f, "({}+({}*i))", c.re, c.im),
            ExprNode::Var => write!(f, "z"),
            ExprNode::Neg(a) => write!(f, "(-{a})"),
            ExprNode::Add(a, b) => write!(f, "({a}+{b})"),
            ExprNode::Sub(a, b) => write!(f, "({a}-{b})"),
            ExprNode::Mul(a, b) => write!(f, "({a}*{b})"),
            ExprNode::Div(a, b) => write!(f, "({a}/{b})"),
            ExprNode::PowInt(a, n) => write!(f, "({a}^{n})"),
            ExprNode::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    fn p(src: &str) -> ExprNode {
        src.parse().unwrap()
    }

    fn c(v: f64) -> Box<ExprNode> {
        Box::new(ExprNode::Const(Complex::new(v, 0.0)))
    }

    use ExprNode::*;

    #[test]
    fn tokenize_examples() {
        use TokenKind::*;
        assert_eq!(
            kinds("z^2+1"),
            vec![
                (Ident, "z".into()),
                (Caret, "^".into()),
                (Number, "2".into()),
                (Plus, "+".into()),
                (Number, "1".into())
            ]
        );
        assert_eq!(
            kinds("exp(z)"),
            vec![
                (Ident, "exp".into()),
                (LParen, "(".into()),
                (Ident, "z".into()),
                (RParen, ")".into())
            ]
        );
        assert_eq!(
            tokenize("z $ 2"),
            Err(ExprError::Lex {
                position: 2,
                found: '$'
            })
        );
    }

    #[test]
    fn tokenize_numbers() {
        use TokenKind::*;
        assert_eq!(kinds("1.5e-3"), vec![(Number, "1.5e-3".into())]);
        assert_eq!(kinds(".25"), vec![(Number, ".25".into())]);
        assert_eq!(kinds("3."), vec![(Number, "3.".into())]);
        let toks = tokenize("  z *  2 ").unwrap();
        assert_eq!(
            toks.iter().map(|t| t.position).collect::<Vec<_>>(),
            vec![2, 4, 7]
        );
    }

    #[test]
    fn unknown_words_and_uppercase_are_lex_errors() {
        assert_eq!(
            tokenize("foo(z)"),
            Err(ExprError::Lex {
                position: 0,
                found: 'f'
            })
        );
        assert_eq!(
            tokenize("z+Exp(z)"),
            Err(ExprError::Lex {
                position: 2,
                found: 'E'
            })
        );
        // 2i is rejected: "2" then the identifier run "i" is fine lexically, the parser rejects it
        assert!(matches!(
            "2i".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 1, .. })
        ));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            p("z^3 - 1"),
            Sub(Box::new(PowInt(Box::new(Var), 3)), c(1.0))
        );
        assert_eq!(
            p("2*i*z"),
            Mul(Box::new(Mul(c(2.0), Box::new(Const(I)))), Box::new(Var))
        );
        assert!(matches!(
            "z^z".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 2, .. })
        ));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(p("-z^2"), Neg(Box::new(PowInt(Box::new(Var), 2))));
        assert_eq!(p("z^-2"), PowInt(Box::new(Var), -2));
        assert_eq!(p("--z"), Neg(Box::new(Neg(Box::new(Var)))));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            "z +".parse::<ExprNode>(),
            Err(ExprError::Parse {
                position: 3,
                expected: "number, 'z', 'i', function call or '('".into()
            })
        );
        assert!(matches!(
            "z^1.5".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 2, .. })
        ));
        assert!(matches!(
            "z^2^3".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 3, .. })
        ));
        assert!(matches!(
            "2z".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 1, .. })
        ));
        assert!(matches!(
            "exp z".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 4, .. })
        ));
        assert!(matches!(
            "(z".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 2, .. })
        ));
        assert!(matches!(
            "".parse::<ExprNode>(),
            Err(ExprError::Parse { position: 0, .. })
        ));
        assert!(matches!(
            "z^99999999999".parse::<ExprNode>(),
            Err(ExprError::Parse { .. })
        ));
    }

    #[test]
    fn eval_complex_examples() {
        assert_eq!(p("z^2+1").eval_complex(I).unwrap(), Complex::new(0.0, 0.0));
        assert_eq!(
            p("exp(z)").eval_complex(Complex::new(0.0, 0.0)).unwrap(),
            Complex::new(1.0, 0.0)
        );
        assert_eq!(
            p("1/z").eval_complex(Complex::new(0.0, 0.0)),
            Err(JetError::DivisionByZero)
        );
        assert_eq!(
            p("log(z)").eval_complex(Complex::new(0.0, 0.0)),
            Err(JetError::Domain("log(0)"))
        );
    }

    #[test]
    fn eval_jet_examples() {
        let j = p("z^2+1").eval_jet(I).unwrap();
        assert_eq!(
            j,
            Jet2::new(
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 2.0),
                Complex::new(2.0, 0.0)
            )
        );
        let j = p("exp(z)").eval_jet(Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(
            j,
            Jet2::new(
                Complex::new(1.0, 0.0),
                Complex::new(1.0, 0.0),
                Complex::new(1.0, 0.0)
            )
        );
        let j = p("3").eval_jet(Complex::new(-0.3, 4.0)).unwrap();
        assert_eq!(j, Jet2::constant(Complex::new(3.0, 0.0)));
    }

    #[test]
    fn format_examples() {
        assert_eq!(
            Sub(Box::new(PowInt(Box::new(Var), 3)), c(1.0)).format(),
            "((z^3)-1)"
        );
        assert_eq!(Var.format(), "z");
        assert_eq!(Call(Elementary::Exp, Box::new(Var)).format(), "exp(z)");
        assert_eq!(p("-z^-2*i").format(), "((-(z^-2))*i)");
    }

    #[test]
    fn general_constants_format_to_equal_values() {
        let e = Const(Complex::new(-1.5, 2.0));
        let back = p(&e.format());
        assert_eq!(
            back.eval_complex(Complex::new(0.0, 0.0)).unwrap(),
            Complex::new(-1.5, 2.0)
        );
    }
}

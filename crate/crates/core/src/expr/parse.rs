use std::collections::BTreeMap;

use super::{BinOp, ExprError, Func, Node};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent only when digits follow, so "2e" stays "2" then "e"
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("malformed number '{text}'"),
                })?;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

pub(super) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
    params: &'a BTreeMap<String, f64>,
}

impl<'a> Parser<'a> {
    pub(super) fn new(
        src: &str,
        vars: &'a [&'a str],
        params: &'a BTreeMap<String, f64>,
    ) -> Result<Self, ExprError> {
        if src.trim().is_empty() {
            return Err(ExprError::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            vars,
            params,
        })
    }

    pub(super) fn parse(mut self) -> Result<Node, ExprError> {
        let node = self.expr()?;
        match self.peek() {
            Tok::End => Ok(node),
            tok => Err(self.unexpected(tok.clone())),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, tok: Tok) -> ExprError {
        ExprError::Syntax {
            offset: self.offset(),
            message: format!("unexpected {}", describe(&tok)),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ExprError::Syntax {
                offset: self.offset(),
                message: format!("expected {}, found {}", describe(&want), describe(self.peek())),
            })
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let (_, at) = self.bump();
            let rhs = self.term()?;
            lhs = Node::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                at,
            };
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let (_, at) = self.bump();
            let rhs = self.unary()?;
            lhs = Node::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                at,
            };
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, at) = self.bump();
        // right-associative; the exponent may carry its own sign
        let exp = self.unary()?;
        Ok(Node::Pow {
            base: Box::new(base),
            const_exp: !exp.has_var(),
            exp: Box::new(exp),
            at,
        })
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(name, at),
            other => {
                self.pos -= 1;
                Err(self.unexpected(other))
            }
        }
    }

    fn identifier(&mut self, name: String, at: usize) -> Result<Node, ExprError> {
        if let Some(func) = Func::from_name(&name) {
            if *self.peek() != Tok::LParen {
                return Err(ExprError::Arity {
                    name,
                    offset: at,
                    expected: 1,
                    found: 0,
                });
            }
            self.bump();
            let mut args = Vec::new();
            if *self.peek() != Tok::RParen {
                args.push(self.expr()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
            }
            self.expect(Tok::RParen)?;
            if args.len() != 1 {
                return Err(ExprError::Arity {
                    name,
                    offset: at,
                    expected: 1,
                    found: args.len(),
                });
            }
            return Ok(Node::Call {
                func,
                arg: Box::new(args.pop().unwrap()),
                at,
            });
        }
        let node = if let Some(i) = self.vars.iter().position(|v| *v == name) {
            Node::Var(i)
        } else if let Some(v) = self.params.get(&name) {
            Node::Param(name.as_str().into(), *v)
        } else if name == "pi" {
            Node::Constant("pi", std::f64::consts::PI)
        } else if name == "e" {
            Node::Constant("e", std::f64::consts::E)
        } else {
            return Err(ExprError::UnknownIdentifier { name, offset: at });
        };
        Ok(node)
    }
}

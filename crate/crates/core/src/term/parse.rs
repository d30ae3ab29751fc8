use super::{builtin, FunctionTerm, TermError};
use crate::exact::Nat;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(src[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(TermError::Parse {
                    pos: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Parse {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), TermError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.at += 1;
                Ok(())
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn nat(&mut self) -> Result<Nat, TermError> {
        match self.peek() {
            Some(Tok::Num(s)) => {
                let n: Nat = s.parse().expect("lexer only admits digits");
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a natural number"),
        }
    }

    fn small(&mut self) -> Result<usize, TermError> {
        let pos = self.pos();
        let n = self.nat()?;
        usize::try_from(&n).map_err(|_| TermError::Parse {
            pos,
            message: "number too large".to_string(),
        })
    }

    fn term(&mut self) -> Result<FunctionTerm, TermError> {
        let name = match self.next() {
            Some(Tok::Ident(name)) => name,
            Some(_) => {
                self.at -= 1;
                return self.err("expected a term");
            }
            None => return self.err("unexpected end of input, expected a term"),
        };
        let args_follow = self.peek() == Some(&Tok::LParen);
        match (name.as_str(), args_follow) {
            ("Z", false) => Ok(FunctionTerm::zero()),
            ("S", false) => Ok(FunctionTerm::succ()),
            ("ackermann", false) => Ok(FunctionTerm::ackermann()),
            ("proj", true) => {
                self.at += 1;
                let n = self.small()?;
                self.expect(Tok::Comma, "`,`")?;
                let i = self.small()?;
                self.expect(Tok::RParen, "`)`")?;
                FunctionTerm::proj(n, i)
            }
            ("const", true) => {
                self.at += 1;
                let c = self.nat()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(FunctionTerm::constant(c))
            }
            ("ladder", true) => {
                self.at += 1;
                let n = self.small()?;
                self.expect(Tok::RParen, "`)`")?;
                let n = u32::try_from(n).map_err(|_| TermError::Parse {
                    pos: self.pos(),
                    message: "ladder level too large".to_string(),
                })?;
                Ok(FunctionTerm::ladder(n))
            }
            ("comp", true) => {
                self.at += 1;
                let g = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                self.expect(Tok::LBracket, "`[`")?;
                let mut hs = Vec::new();
                if self.peek() != Some(&Tok::RBracket) {
                    hs.push(self.term()?);
                    while self.peek() == Some(&Tok::Comma) {
                        self.at += 1;
                        hs.push(self.term()?);
                    }
                }
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::RParen, "`)`")?;
                FunctionTerm::compose(g, hs)
            }
            ("primrec", true) => {
                self.at += 1;
                let g = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let h = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                FunctionTerm::primrec(g, h)
            }
            ("bprimrec", true) => {
                self.at += 1;
                let g = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let h = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let j = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                FunctionTerm::bounded_primrec(g, h, j)
            }
            ("bsum" | "bprod" | "mu", true) => {
                self.at += 1;
                let f = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                match name.as_str() {
                    "bsum" => FunctionTerm::bounded_sum(f),
                    "bprod" => FunctionTerm::bounded_prod(f),
                    _ => FunctionTerm::minimizer(f),
                }
            }
            (
                "proj" | "const" | "ladder" | "comp" | "primrec" | "bprimrec" | "bsum" | "bprod"
                | "mu",
                false,
            ) => self.err(format!("expected `(` after `{name}`")),
            (other, false) => builtin(other),
            (_, true) => self.err(format!("`{name}` takes no arguments")),
        }
    }
}

/// Parses the textual term syntax; whitespace is insignificant.
pub fn parse_term(src: &str) -> Result<FunctionTerm, TermError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let t = p.term()?;
    if p.at != p.toks.len() {
        return p.err("trailing input after term");
    }
    Ok(t)
}

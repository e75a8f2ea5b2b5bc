//! Text form of free-group words.
//!
//! ```text
//! expr  := term ('*' term)*        (empty input is the identity)
//! term  := atom ('^' integer)?
//! atom  := 'a' digits | '1' | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `[x,y]` is the commutator `x^-1 y^-1 x y`. Whitespace is ignored.

use crate::error::{Error, Result};
use crate::free_group::GroupWord;

pub fn parse_group_word(input: &str) -> Result<GroupWord> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Ok(GroupWord::identity());
    }
    let g = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(g)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<GroupWord> {
        let mut g = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                let h = self.term()?;
                g = g.multiply(&h);
            } else {
                return Ok(g);
            }
        }
    }

    fn term(&mut self) -> Result<GroupWord> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(base.power(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<GroupWord> {
        self.skip_ws();
        match self.peek() {
            Some(b'a') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected generator index after `a`"));
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let index = text
                    .parse::<usize>()
                    .map_err(|_| self.error("generator index too large"))?;
                Ok(GroupWord::generator(index))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(GroupWord::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let g = self.expr()?;
                self.expect(b')')?;
                Ok(g)
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b',')?;
                let y = self.expr()?;
                self.expect(b']')?;
                Ok(x.commutator(&y))
            }
            Some(_) => Err(self.error("expected generator, `1`, `(` or `[`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i64>()
            .map_err(|_| Error::Parse {
                offset: start,
                message: format!("bad exponent `{text}`"),
            })
    }
}

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Bot,
    Top,
    Atom(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Diamond,
    Rhd,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Atom(name) => format!("atom `{name}`"),
        Tok::End => "end of input".into(),
        other => format!("{other:?}"),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, message: String| ParseError { pos, message };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'a'..='z' => {
                while i < chars.len() && matches!(chars[i], 'a'..='z' | '0'..='9' | '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((
                    start,
                    match word.as_str() {
                        "bot" => Tok::Bot,
                        "top" => Tok::Top,
                        _ => Tok::Atom(word),
                    },
                ));
                continue;
            }
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '∨' => Tok::Or,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '□' => Tok::Box,
            '◇' => Tok::Diamond,
            '▷' => Tok::Rhd,
            '⊥' => Tok::Bot,
            '⊤' => Tok::Top,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '|' if next == Some('>') => {
                i += 1;
                Tok::Rhd
            }
            '|' => Tok::Or,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Implies
            }
            '[' if next == Some(']') => {
                i += 1;
                Tok::Box
            }
            '<' if next == Some('>') => {
                i += 1;
                Tok::Diamond
            }
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, message: String) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message,
        })
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.implies()?;
            if *self.peek() == Tok::Iff {
                return self.fail("`<->` is non-associative; add parentheses".into());
            }
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.rhd()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let right = self.implies()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn rhd(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Rhd {
            self.bump();
            let right = self.or()?;
            if *self.peek() == Tok::Rhd {
                return self.fail("`|>` is non-associative; add parentheses".into());
            }
            return Ok(Formula::rhd(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::Diamond => Ok(Formula::diamond(self.unary()?)),
            Tok::Bot => Ok(Formula::Bot),
            Tok::Top => Ok(Formula::top()),
            Tok::Atom(name) => Ok(Formula::atom(&name)),
            Tok::LParen => {
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(format!("expected `)`, found {}", describe(self.peek())));
                }
                self.bump();
                Ok(inner)
            }
            other => {
                self.at -= usize::from(other != Tok::End);
                self.fail(format!("expected a formula, found {}", describe(&other)))
            }
        }
    }
}

/// Parse the ASCII (or Unicode) concrete syntax into a primitive formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return p.fail(format!("unexpected {}", describe(p.peek())));
    }
    Ok(f)
}

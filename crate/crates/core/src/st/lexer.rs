use crate::ir::Pos;
use crate::lex::Cursor;

use super::StError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    /// Identifier or keyword; keywords are recognized by the parser.
    Word(String),
    Number(String),
    /// Duration literal, in seconds.
    Duration(f64),
    Assign,
    Colon,
    Semi,
    Comma,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Power,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Duration(_) => "duration literal".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Assign => ":=",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Power => "**",
            Tok::Eq => "=",
            Tok::Ne => "<>",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            _ => "",
        }
    }
}

pub(super) fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, StError> {
    let mut cur = Cursor::new(src);
    let mut out = Vec::new();
    loop {
        skip_trivia(&mut cur)?;
        let pos = cur.pos();
        let Some(c) = cur.peek() else {
            out.push((Tok::Eof, pos));
            return Ok(out);
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let word = cur.eat_ident();
            if cur.peek() == Some('#') {
                cur.bump();
                lex_typed_literal(&mut cur, word, pos)?
            } else {
                Tok::Word(word.to_string())
            }
        } else if c.is_ascii_digit() {
            let n = cur.eat_number();
            if cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                return Err(StError::Syntax {
                    pos,
                    expected: "decimal literal".into(),
                    found: format!("`{}`", &cur.rest()[..1]),
                });
            }
            Tok::Number(n.to_string())
        } else {
            let (tok, len) = match (c, cur.peek_nth(1)) {
                (':', Some('=')) => (Tok::Assign, 2),
                ('*', Some('*')) => (Tok::Power, 2),
                ('<', Some('>')) => (Tok::Ne, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                (':', _) => (Tok::Colon, 1),
                (';', _) => (Tok::Semi, 1),
                (',', _) => (Tok::Comma, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('=', _) => (Tok::Eq, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                _ => {
                    return Err(StError::Syntax {
                        pos,
                        expected: "token".into(),
                        found: format!("character `{c}`"),
                    })
                }
            };
            cur.bump_n(len);
            tok
        };
        out.push((tok, pos));
    }
}

fn skip_trivia(cur: &mut Cursor<'_>) -> Result<(), StError> {
    loop {
        cur.eat_while(char::is_whitespace);
        if cur.starts_with("(*") {
            let pos = cur.pos();
            cur.bump_n(2);
            loop {
                if cur.starts_with("*)") {
                    cur.bump_n(2);
                    break;
                }
                if cur.bump().is_none() {
                    return Err(StError::Syntax {
                        pos,
                        expected: "`*)` closing the comment".into(),
                        found: "end of input".into(),
                    });
                }
            }
        } else if cur.starts_with("//") {
            cur.eat_while(|c| c != '\n');
        } else {
            return Ok(());
        }
    }
}

/// `T#<decimal> s` or `T#<decimal> ms`; other typed literals are rejected.
fn lex_typed_literal(cur: &mut Cursor<'_>, prefix: &str, pos: Pos) -> Result<Tok, StError> {
    if !prefix.eq_ignore_ascii_case("T") {
        return Err(StError::Unsupported {
            pos,
            construct: format!("typed literal `{prefix}#`"),
        });
    }
    let number = cur.eat_number();
    if number.is_empty() {
        return Err(StError::Syntax {
            pos: cur.pos(),
            expected: "duration value".into(),
            found: cur.peek().map_or("end of input".into(), |c| format!("`{c}`")),
        });
    }
    cur.eat_while(|c| c == ' ' || c == '\t');
    let unit_pos = cur.pos();
    let unit = cur.eat_ident();
    let scale = match unit.to_ascii_lowercase().as_str() {
        "s" => 1.0,
        "ms" => 1e-3,
        "" => {
            return Err(StError::Syntax {
                pos: unit_pos,
                expected: "duration unit `s` or `ms`".into(),
                found: cur.peek().map_or("end of input".into(), |c| format!("`{c}`")),
            })
        }
        other => {
            return Err(StError::Unsupported {
                pos: unit_pos,
                construct: format!("duration unit `{other}`"),
            })
        }
    };
    let value: f64 = number.parse().map_err(|_| StError::Syntax {
        pos,
        expected: "duration value".into(),
        found: format!("`{number}`"),
    })?;
    Ok(Tok::Duration(if scale == 1.0 { value } else { value / 1000.0 }))
}

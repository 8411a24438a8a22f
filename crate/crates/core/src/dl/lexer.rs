use crate::ir::Pos;
use crate::lex::Cursor;

use super::DlError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Ident(String),
    Number(String),
    Assign,
    Prime,
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Choice,
    Question,
    And,
    Or,
    Not,
    Imply,
    Equiv,
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
            Tok::Ident(w) => format!("`{w}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Assign => ":=",
            Tok::Prime => "'",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Choice => "++",
            Tok::Question => "?",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Not => "!",
            Tok::Imply => "->",
            Tok::Equiv => "<->",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Ident(_) | Tok::Number(_) | Tok::Eof => "",
        }
    }
}

const SYMBOLS: &[(&str, Tok)] = &[
    ("<->", Tok::Equiv),
    (":=", Tok::Assign),
    ("++", Tok::Choice),
    ("->", Tok::Imply),
    ("!=", Tok::Ne),
    ("<=", Tok::Le),
    (">=", Tok::Ge),
    ("'", Tok::Prime),
    (";", Tok::Semi),
    (",", Tok::Comma),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
    ("+", Tok::Plus),
    ("-", Tok::Minus),
    ("*", Tok::Star),
    ("/", Tok::Slash),
    ("^", Tok::Caret),
    ("?", Tok::Question),
    ("&", Tok::And),
    ("|", Tok::Or),
    ("!", Tok::Not),
    ("=", Tok::Eq),
    ("<", Tok::Lt),
    (">", Tok::Gt),
];

pub(super) fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, DlError> {
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
            Tok::Ident(cur.eat_ident().to_string())
        } else if c.is_ascii_digit() {
            let n = cur.eat_number();
            if cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.') {
                return Err(DlError::Syntax {
                    pos,
                    expected: "decimal literal".into(),
                    found: format!("`{}`", &cur.rest()[..1]),
                });
            }
            Tok::Number(n.to_string())
        } else if let Some((sym, tok)) = SYMBOLS.iter().find(|(s, _)| cur.starts_with(s)) {
            cur.bump_n(sym.len());
            tok.clone()
        } else {
            return Err(DlError::Syntax {
                pos,
                expected: "token".into(),
                found: format!("character `{c}`"),
            });
        };
        out.push((tok, pos));
    }
}

fn skip_trivia(cur: &mut Cursor<'_>) -> Result<(), DlError> {
    loop {
        cur.eat_while(char::is_whitespace);
        if cur.starts_with("/*") {
            let pos = cur.pos();
            cur.bump_n(2);
            loop {
                if cur.starts_with("*/") {
                    cur.bump_n(2);
                    break;
                }
                if cur.bump().is_none() {
                    return Err(DlError::Syntax {
                        pos,
                        expected: "`*/` closing the comment".into(),
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

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn multi_char_symbols() {
        assert_eq!(
            toks("a <-> b -> c ++ x' != y <-1"),
            vec![
                Tok::Ident("a".into()),
                Tok::Equiv,
                Tok::Ident("b".into()),
                Tok::Imply,
                Tok::Ident("c".into()),
                Tok::Choice,
                Tok::Ident("x".into()),
                Tok::Prime,
                Tok::Ne,
                Tok::Ident("y".into()),
                Tok::Lt,
                Tok::Minus,
                Tok::Number("1".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments() {
        assert_eq!(toks("x /* c */ := // d\n *"), vec![
            Tok::Ident("x".into()),
            Tok::Assign,
            Tok::Star,
            Tok::Eof
        ]);
        assert!(tokenize("/* open").is_err());
    }
}

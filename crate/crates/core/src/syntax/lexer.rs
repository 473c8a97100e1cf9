use super::{CompareOp, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Anon,
    Int(i64),
    /// Raw text including the surrounding quotes.
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Bar,
    Colon,
    At,
    Plus,
    If,
    WeakIf,
    Not,
    Cmp(CompareOp),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Str(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Anon => "`_`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Colon => "`:`".into(),
            Tok::At => "`@`".into(),
            Tok::Plus => "`+`".into(),
            Tok::If => "`:-`".into(),
            Tok::WeakIf => "`:~`".into(),
            Tok::Not => "`not`".into(),
            Tok::Cmp(op) => format!("`{}`", op.symbol()),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let peek = chars.get(i + 1).copied();
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };

        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            let tok = if s == "_" {
                Tok::Anon
            } else if s == "not" {
                Tok::Not
            } else if c.is_ascii_lowercase() {
                Tok::Ident(s)
            } else if super::is_anonymous_name(&s) {
                return Err(error(
                    start_line,
                    start_col,
                    format!("variable name `{s}` is reserved for anonymous variables"),
                ));
            } else {
                Tok::Var(s)
            };
            push(&mut out, tok);
            continue;
        }

        if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|p| p.is_ascii_digit())) {
            let mut s = String::new();
            s.push(c);
            bump!();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            let v: i64 = s
                .parse()
                .map_err(|_| error(start_line, start_col, format!("integer `{s}` out of range")))?;
            push(&mut out, Tok::Int(v));
            continue;
        }

        if c == '"' {
            let mut s = String::from('"');
            bump!();
            loop {
                match chars.get(i).copied() {
                    None | Some('\n') => {
                        return Err(error(start_line, start_col, "unterminated string"));
                    }
                    Some('\\') => {
                        s.push('\\');
                        bump!();
                        match chars.get(i).copied() {
                            Some(e) if e != '\n' => {
                                s.push(e);
                                bump!();
                            }
                            _ => return Err(error(start_line, start_col, "unterminated string")),
                        }
                    }
                    Some('"') => {
                        s.push('"');
                        bump!();
                        break;
                    }
                    Some(other) => {
                        s.push(other);
                        bump!();
                    }
                }
            }
            push(&mut out, Tok::Str(s));
            continue;
        }

        let (tok, width) = match (c, peek) {
            (':', Some('-')) => (Tok::If, 2),
            (':', Some('~')) => (Tok::WeakIf, 2),
            ('!', Some('=')) => (Tok::Cmp(CompareOp::Ne), 2),
            ('<', Some('>')) => (Tok::Cmp(CompareOp::Ne), 2),
            ('<', Some('=')) => (Tok::Cmp(CompareOp::Le), 2),
            ('>', Some('=')) => (Tok::Cmp(CompareOp::Ge), 2),
            ('=', Some('=')) => (Tok::Cmp(CompareOp::Eq), 2),
            ('<', _) => (Tok::Cmp(CompareOp::Lt), 1),
            ('>', _) => (Tok::Cmp(CompareOp::Gt), 1),
            ('=', _) => (Tok::Cmp(CompareOp::Eq), 1),
            (':', _) => (Tok::Colon, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            ('|', _) => (Tok::Bar, 1),
            ('@', _) => (Tok::At, 1),
            ('+', _) => (Tok::Plus, 1),
            _ => {
                return Err(error(
                    start_line,
                    start_col,
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        for _ in 0..width {
            bump!();
        }
        push(&mut out, tok);
    }
    Ok(out)
}

use super::diagnostic::{Code, Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Forall,
    Let,
    In,
    IntType,
    Lambda,
    BigLambda,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    DoubleColon,
    Dot,
    Arrow,
    FatArrow,
    Star,
    Equals,
    At,
    Comma,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{}`", name),
            Tok::Int(n) => format!("integer `{}`", n),
            Tok::Forall => "`forall`".into(),
            Tok::Let => "`let`".into(),
            Tok::In => "`in`".into(),
            Tok::IntType => "`Int`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::BigLambda => "`/\\`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::DoubleColon => "`::`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Star => "`*`".into(),
            Tok::Equals => "`=`".into(),
            Tok::At => "`@`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub const KEYWORDS: &[&str] = &["forall", "let", "in", "Int"];

/// Splits `text` into tokens. Newlines are only emitted when `newlines` is
/// set (context files use them as separators).
pub fn lex(text: &str, newlines: bool) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    let offset = |i: usize| chars.get(i).map(|c| c.0).unwrap_or(text.len());

    while i < chars.len() {
        let (start, c) = chars[i];
        let (start_line, start_col) = (line, col);
        let peek = chars.get(i + 1).map(|c| c.1);

        if c == '\n' {
            if newlines {
                tokens.push(Token {
                    tok: Tok::Newline,
                    span: Span { start, end: start + 1, line, col, end_line: line, end_col: col + 1 },
                });
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && peek == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }

        let (tok, width) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'') {
                j += 1;
            }
            let word = &text[start..offset(j)];
            let tok = match word {
                "forall" => Tok::Forall,
                "let" => Tok::Let,
                "in" => Tok::In,
                "Int" => Tok::IntType,
                _ => Tok::Ident(word.to_string()),
            };
            (tok, j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let digits = &text[start..offset(j)];
            let value = digits.parse::<i64>().map_err(|_| {
                Diagnostic::error(Code::E001, format!("integer literal `{}` is out of range", digits)).with_span(Span {
                    start,
                    end: offset(j),
                    line,
                    col,
                    end_line: line,
                    end_col: col + (j - i),
                })
            })?;
            (Tok::Int(value), j - i)
        } else {
            match (c, peek) {
                ('/', Some('\\')) => (Tok::BigLambda, 2),
                ('\\', _) => (Tok::Lambda, 1),
                (':', Some(':')) => (Tok::DoubleColon, 2),
                (':', _) => (Tok::Colon, 1),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('=', Some('>')) => (Tok::FatArrow, 2),
                ('=', _) => (Tok::Equals, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                ('.', _) => (Tok::Dot, 1),
                ('*', _) => (Tok::Star, 1),
                ('@', _) => (Tok::At, 1),
                (',', _) => (Tok::Comma, 1),
                _ => {
                    return Err(Diagnostic::error(Code::E001, format!("unexpected character `{}`", c))
                        .with_span(Span {
                            start,
                            end: start + c.len_utf8(),
                            line,
                            col,
                            end_line: line,
                            end_col: col + 1,
                        }))
                }
            }
        };
        i += width;
        col += width;
        tokens.push(Token {
            tok,
            span: Span {
                start,
                end: offset(i),
                line: start_line,
                col: start_col,
                end_line: line,
                end_col: col,
            },
        });
    }
    let end = text.len();
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span { start: end, end, line, col, end_line: line, end_col: col },
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str) -> Vec<Tok> {
        lex(text, false).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_operators_and_comments() {
        assert_eq!(
            toks("/\\[a]. \\[x : a]. x -- summon\n:: Int"),
            vec![
                Tok::BigLambda,
                Tok::LBracket,
                Tok::Ident("a".into()),
                Tok::RBracket,
                Tok::Dot,
                Tok::Lambda,
                Tok::LBracket,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Ident("a".into()),
                Tok::RBracket,
                Tok::Dot,
                Tok::Ident("x".into()),
                Tok::DoubleColon,
                Tok::IntType,
                Tok::Eof
            ]
        );
        assert_eq!(toks("a -> b => c = d"), vec![
            Tok::Ident("a".into()),
            Tok::Arrow,
            Tok::Ident("b".into()),
            Tok::FatArrow,
            Tok::Ident("c".into()),
            Tok::Equals,
            Tok::Ident("d".into()),
            Tok::Eof
        ]);
    }

    #[test]
    fn tracks_lines_and_columns() {
        let tokens = lex("x\n  yy", false).unwrap();
        assert_eq!((tokens[1].span.line, tokens[1].span.col, tokens[1].span.end_col), (2, 3, 5));
    }

    #[test]
    fn rejects_stray_characters() {
        let err = lex("x $ y", false).unwrap_err();
        assert_eq!(err.code, Code::E001);
        assert_eq!(err.span.unwrap().col, 3);
    }
}

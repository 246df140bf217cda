use super::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Int(usize),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Diamond(usize),
    Box(usize),
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Bang,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Int(n) => format!("`{n}`"),
            Token::Tilde => "`~`".into(),
            Token::Amp => "`&`".into(),
            Token::Pipe => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::DoubleArrow => "`<->`".into(),
            Token::Diamond(i) => format!("`<{i}>`"),
            Token::Box(i) => format!("`[{i}]`"),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
            Token::Semi => "`;`".into(),
            Token::Eq => "`=`".into(),
            Token::Bang => "`!`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

pub(crate) type Spanned = (Token, Pos);

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn digits(&mut self) -> Option<usize> {
        let mut text = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        text.parse().ok()
    }
}

fn err(pos: Pos, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        kind,
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let start = cur.pos();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(c) = cur
                .peek()
                .filter(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
            {
                name.push(c);
                cur.bump();
            }
            out.push((Token::Ident(name), start));
            continue;
        }
        if c.is_ascii_digit() {
            let n = cur
                .digits()
                .ok_or_else(|| err(start, ParseErrorKind::Syntax("integer too large".into())))?;
            out.push((Token::Int(n), start));
            continue;
        }
        cur.bump();
        let tok = match c {
            '~' => Token::Tilde,
            '&' => Token::Amp,
            '|' => Token::Pipe,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            ';' => Token::Semi,
            '=' if cur.peek() == Some('>') => {
                return Err(err(start, ParseErrorKind::UnknownOperator("=>".into())));
            }
            '=' => Token::Eq,
            '!' => Token::Bang,
            '-' => {
                if cur.peek() == Some('>') {
                    cur.bump();
                    Token::Arrow
                } else {
                    return Err(err(start, ParseErrorKind::UnknownOperator("-".into())));
                }
            }
            '<' => match cur.peek() {
                Some('-') => {
                    cur.bump();
                    if cur.bump() != Some('>') {
                        return Err(err(start, ParseErrorKind::UnknownOperator("<-".into())));
                    }
                    Token::DoubleArrow
                }
                Some(d) if d.is_ascii_digit() => {
                    let i = modal_index(&mut cur, start, '>')?;
                    Token::Diamond(i)
                }
                _ => return Err(err(start, ParseErrorKind::UnknownOperator("<".into()))),
            },
            '[' => {
                if !cur.peek().is_some_and(|d| d.is_ascii_digit()) {
                    return Err(err(
                        start,
                        ParseErrorKind::Syntax("expected relation index after `[`".into()),
                    ));
                }
                Token::Box(modal_index(&mut cur, start, ']')?)
            }
            other => return Err(err(start, ParseErrorKind::UnknownOperator(other.to_string()))),
        };
        out.push((tok, start));
    }
    Ok(out)
}

fn modal_index(cur: &mut Cursor<'_>, start: Pos, close: char) -> Result<usize, ParseError> {
    let i = cur
        .digits()
        .ok_or_else(|| err(start, ParseErrorKind::Syntax("relation index too large".into())))?;
    if cur.bump() != Some(close) {
        return Err(err(
            start,
            ParseErrorKind::Syntax(format!("expected `{close}` after relation index")),
        ));
    }
    if i == 0 {
        return Err(err(start, ParseErrorKind::ZeroRelationIndex));
    }
    Ok(i)
}

/// Token stream with a one-token lookahead and end-of-input position tracking.
pub(crate) struct Tokens {
    toks: Vec<Spanned>,
    at: usize,
    end: Pos,
}

impl Tokens {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        let toks = tokenize(src)?;
        let end = end_pos(src);
        Ok(Tokens { toks, at: 0, end })
    }

    pub(crate) fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    pub(crate) fn peek2(&self) -> Option<&Token> {
        self.toks.get(self.at + 1).map(|(t, _)| t)
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    pub(crate) fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, kind: ParseErrorKind) -> ParseError {
        err(self.pos(), kind)
    }

    pub(crate) fn error_at(&self, pos: Pos, kind: ParseErrorKind) -> ParseError {
        err(pos, kind)
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        let found = self
            .peek()
            .map(Token::describe)
            .unwrap_or_else(|| "end of input".into());
        self.error(ParseErrorKind::Syntax(format!(
            "expected {wanted}, found {found}"
        )))
    }

    pub(crate) fn expect(&mut self, tok: &Token, wanted: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }
}

fn end_pos(src: &str) -> Pos {
    let mut pos = Pos { line: 1, column: 1 };
    for c in src.chars() {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    }
    pos
}

//! Recursive-descent parser for modal formulas.
//!
//! ```text
//! iff   := imp ("<->" imp)*          left-associative
//! imp   := or ("->" imp)?            right-associative
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "~" unary | "<i>" unary | "[i]" unary | atom
//! atom  := ident | "true" | "false" | "(" iff ")"
//! ```

use super::error::{ParseError, ParseErrorKind};
use super::formula::ModalFormula;
use super::lexer::{Token, Tokens};

/// Parses a formula from its textual form. `#` starts a line comment.
pub fn parse_formula(text: &str) -> Result<ModalFormula, ParseError> {
    let mut toks = Tokens::new(text)?;
    let f = iff(&mut toks)?;
    if toks.peek().is_some() {
        return Err(toks.unexpected("an operator or end of input"));
    }
    Ok(f)
}

fn iff(t: &mut Tokens) -> Result<ModalFormula, ParseError> {
    let mut left = imp(t)?;
    while t.eat(&Token::DoubleArrow) {
        let right = imp(t)?;
        left = ModalFormula::iff(left, right);
    }
    Ok(left)
}

fn imp(t: &mut Tokens) -> Result<ModalFormula, ParseError> {
    let left = or(t)?;
    if t.eat(&Token::Arrow) {
        let right = imp(t)?;
        return Ok(ModalFormula::implies(left, right));
    }
    Ok(left)
}

fn or(t: &mut Tokens) -> Result<ModalFormula, ParseError> {
    let mut left = and(t)?;
    while t.eat(&Token::Pipe) {
        left = ModalFormula::or(left, and(t)?);
    }
    Ok(left)
}

fn and(t: &mut Tokens) -> Result<ModalFormula, ParseError> {
    let mut left = unary(t)?;
    while t.eat(&Token::Amp) {
        left = ModalFormula::and(left, unary(t)?);
    }
    Ok(left)
}

fn unary(t: &mut Tokens) -> Result<ModalFormula, ParseError> {
    match t.peek() {
        Some(Token::Tilde) => {
            t.next();
            Ok(ModalFormula::not(unary(t)?))
        }
        Some(&Token::Diamond(i)) => {
            t.next();
            Ok(ModalFormula::diamond(i, unary(t)?))
        }
        Some(&Token::Box(i)) => {
            t.next();
            Ok(ModalFormula::boxed(i, unary(t)?))
        }
        Some(Token::Bang) => Err(t.error(ParseErrorKind::UnknownOperator("!".into()))),
        Some(Token::Eq) => Err(t.error(ParseErrorKind::UnknownOperator("=".into()))),
        _ => atom(t),
    }
}

fn atom(t: &mut Tokens) -> Result<ModalFormula, ParseError> {
    match t.peek().cloned() {
        Some(Token::Ident(name)) => {
            t.next();
            Ok(match name.as_str() {
                "true" => ModalFormula::Top,
                "false" => ModalFormula::Bottom,
                _ => ModalFormula::Var(name),
            })
        }
        Some(Token::LParen) => {
            t.next();
            let f = iff(t)?;
            t.expect(&Token::RParen, "`)`")?;
            Ok(f)
        }
        _ => Err(t.unexpected("a formula")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ModalFormula {
        ModalFormula::var(s)
    }

    #[test]
    fn diamond_and_box() {
        let f = parse_formula("<1> p & [2] ~q").unwrap();
        let want = ModalFormula::and(
            ModalFormula::diamond(1, v("p")),
            ModalFormula::boxed(2, ModalFormula::not(v("q"))),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn constants() {
        assert_eq!(parse_formula("true").unwrap(), ModalFormula::Top);
        assert_eq!(parse_formula(" false ").unwrap(), ModalFormula::Bottom);
    }

    #[test]
    fn zero_relation_index() {
        let e = parse_formula("<0> p").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ZeroRelationIndex);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("a | b & c -> d -> e <-> f <-> g").unwrap();
        let want = ModalFormula::iff(
            ModalFormula::iff(
                ModalFormula::implies(
                    ModalFormula::or(v("a"), ModalFormula::and(v("b"), v("c"))),
                    ModalFormula::implies(v("d"), v("e")),
                ),
                v("f"),
            ),
            v("g"),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn unary_binds_tightest() {
        let f = parse_formula("~p & <1> q").unwrap();
        assert_eq!(
            f,
            ModalFormula::and(ModalFormula::not(v("p")), ModalFormula::diamond(1, v("q")))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p &\n  (q | )").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse_formula("p => q").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownOperator("=>".into()));
        let e = parse_formula("p q").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
    }

    #[test]
    fn unbalanced_parenthesis() {
        assert!(parse_formula("(p & q").is_err());
        assert!(parse_formula("p)").is_err());
        assert!(parse_formula("").is_err());
    }
}

//! Specifications: Boolean combinations of payoff thresholds and edge
//! automata.
//!
//! ```text
//! spec  := or
//! or    := and ('||' and)*
//! and   := unary ('&&' unary)*
//! unary := '!' unary | '(' spec ')' | 'true' | 'false'
//!        | 'payoff' '(' <player> ')' op <rational> | 'automaton' '"' <file> '"'
//! op    := '<' | '<=' | '>' | '>=' | '='
//! ```

use std::fmt;

use thiserror::Error;

use super::automaton::{parse_automaton, AutomatonError, EdgeAutomaton};
use crate::game::{payoff_of_lasso, Game, Lasso, PathError, Player};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    pub fn holds(self, a: Rational, b: Rational) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PayoffSpec {
    True,
    False,
    Payoff {
        player: Player,
        op: CmpOp,
        value: Rational,
    },
    Automaton {
        file: String,
        automaton: Box<EdgeAutomaton>,
    },
    Not(Box<PayoffSpec>),
    And(Box<PayoffSpec>, Box<PayoffSpec>),
    Or(Box<PayoffSpec>, Box<PayoffSpec>),
}

impl PayoffSpec {
    /// Truth value on the outcome `lasso` of `g`.
    pub fn eval(&self, g: &Game, lasso: &Lasso) -> Result<bool, PathError> {
        Ok(match self {
            PayoffSpec::True => true,
            PayoffSpec::False => false,
            PayoffSpec::Payoff { player, op, value } => {
                op.holds(payoff_of_lasso(g.measure(), g, *player, lasso)?, *value)
            }
            PayoffSpec::Automaton { automaton, .. } => automaton.accepts(lasso),
            PayoffSpec::Not(s) => !s.eval(g, lasso)?,
            PayoffSpec::And(a, b) => a.eval(g, lasso)? && b.eval(g, lasso)?,
            PayoffSpec::Or(a, b) => a.eval(g, lasso)? || b.eval(g, lasso)?,
        })
    }
}

impl fmt::Display for PayoffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PayoffSpec::True => write!(f, "true"),
            PayoffSpec::False => write!(f, "false"),
            PayoffSpec::Payoff { player, op, value } => {
                write!(f, "payoff({player}) {} {value}", op.symbol())
            }
            PayoffSpec::Automaton { file, .. } => write!(f, "automaton \"{file}\""),
            PayoffSpec::Not(s) => write!(f, "!({s})"),
            PayoffSpec::And(a, b) => write!(f, "({a} && {b})"),
            PayoffSpec::Or(a, b) => write!(f, "({a} || {b})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("player {player} out of range (the game has {players})")]
    Player { player: usize, players: usize },
    #[error("cannot read `{file}`: {msg}")]
    Load { file: String, msg: String },
    #[error("`{file}`: {source}")]
    Automaton {
        file: String,
        source: AutomatonError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(String),
    Str(String),
    Sym(&'static str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Word(chars[start..i].iter().collect())));
            continue;
        }
        if c.is_ascii_digit() || c == '-' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            out.push((col, Tok::Num(chars[start..i].iter().collect())));
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(SpecError::Syntax {
                    col,
                    msg: "unterminated string".into(),
                });
            }
            out.push((col, Tok::Str(chars[start..i].iter().collect())));
            i += 1;
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = ["&&", "||", "<=", ">="].into_iter().find(|s| *s == two);
        if let Some(s) = sym {
            out.push((col, Tok::Sym(s)));
            i += 2;
            continue;
        }
        let one = ["(", ")", "!", "<", ">", "="]
            .into_iter()
            .find(|s| s.starts_with(c));
        match one {
            Some(s) => out.push((col, Tok::Sym(s))),
            None => {
                return Err(SpecError::Syntax {
                    col,
                    msg: format!("unexpected `{c}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    game: &'a Game,
    load: &'a mut dyn FnMut(&str) -> Result<String, String>,
}

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError::Syntax {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, sym: &str) -> bool {
        let hit = matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, sym: &str) -> Result<(), SpecError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn or(&mut self) -> Result<PayoffSpec, SpecError> {
        let mut left = self.and()?;
        while self.eat("||") {
            left = PayoffSpec::Or(Box::new(left), Box::new(self.and()?));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<PayoffSpec, SpecError> {
        let mut left = self.unary()?;
        while self.eat("&&") {
            left = PayoffSpec::And(Box::new(left), Box::new(self.unary()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<PayoffSpec, SpecError> {
        if self.eat("!") {
            return Ok(PayoffSpec::Not(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let inner = self.or()?;
            self.expect(")")?;
            return Ok(inner);
        }
        let word = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return self.err("expected an atom"),
        };
        self.pos += 1;
        match word.as_str() {
            "true" => Ok(PayoffSpec::True),
            "false" => Ok(PayoffSpec::False),
            "payoff" => self.payoff(),
            "automaton" => {
                let Some(Tok::Str(file)) = self.peek().cloned() else {
                    return self.err("expected a quoted file name");
                };
                self.pos += 1;
                let text = (self.load)(&file).map_err(|msg| SpecError::Load {
                    file: file.clone(),
                    msg,
                })?;
                let automaton =
                    parse_automaton(&text, self.game).map_err(|source| SpecError::Automaton {
                        file: file.clone(),
                        source,
                    })?;
                Ok(PayoffSpec::Automaton {
                    file,
                    automaton: Box::new(automaton),
                })
            }
            w => self.err(format!("unknown atom `{w}`")),
        }
    }

    fn payoff(&mut self) -> Result<PayoffSpec, SpecError> {
        self.expect("(")?;
        let player = match self.peek() {
            Some(Tok::Num(n)) => n.parse::<usize>().ok(),
            _ => None,
        };
        let Some(player) = player else {
            return self.err("expected a player number");
        };
        if player == 0 || player > self.game.players() {
            return Err(SpecError::Player {
                player,
                players: self.game.players(),
            });
        }
        self.pos += 1;
        self.expect(")")?;
        let op = match self.peek() {
            Some(Tok::Sym("<")) => CmpOp::Lt,
            Some(Tok::Sym("<=")) => CmpOp::Le,
            Some(Tok::Sym(">")) => CmpOp::Gt,
            Some(Tok::Sym(">=")) => CmpOp::Ge,
            Some(Tok::Sym("=")) => CmpOp::Eq,
            _ => return self.err("expected a comparison"),
        };
        self.pos += 1;
        let value = match self.peek() {
            Some(Tok::Num(n)) => n.parse::<Rational>().ok(),
            _ => None,
        };
        let Some(value) = value else {
            return self.err("expected a rational");
        };
        self.pos += 1;
        Ok(PayoffSpec::Payoff {
            player: Player::new(player),
            op,
            value,
        })
    }
}

/// Parses a specification over `g`; `load` returns the text of an
/// automaton file named in the specification.
pub fn parse_spec(
    text: &str,
    g: &Game,
    load: &mut dyn FnMut(&str) -> Result<String, String>,
) -> Result<PayoffSpec, SpecError> {
    let toks = tokenize(text)?;
    let end = text.chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        game: g,
        load,
    };
    let spec = p.or()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn no_files(_: &str) -> Result<String, String> {
        Err("no files".into())
    }

    fn parse(text: &str) -> Result<PayoffSpec, SpecError> {
        parse_spec(text, &fixtures::fig1_liminf(), &mut no_files)
    }

    #[test]
    fn atoms_and_connectives() {
        assert_eq!(
            parse("payoff(1) >= 2").unwrap(),
            PayoffSpec::Payoff {
                player: Player::new(1),
                op: CmpOp::Ge,
                value: 2.into()
            }
        );
        let s = parse("!(payoff(1) < 1/2 || payoff(2) = -1) && true").unwrap();
        assert_eq!(
            s.to_string(),
            "(!((payoff(1) < 1/2 || payoff(2) = -1)) && true)"
        );
        assert_eq!(parse("# threshold\ntrue\n").unwrap(), PayoffSpec::True);
    }

    #[test]
    fn and_binds_tighter() {
        let s = parse("true || false && false").unwrap();
        assert!(matches!(s, PayoffSpec::Or(..)));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("payoff(3) >= 0"),
            Err(SpecError::Player { player: 3, .. })
        ));
        assert!(matches!(
            parse("payoff(1) >= "),
            Err(SpecError::Syntax { .. })
        ));
        assert!(matches!(parse("true true"), Err(SpecError::Syntax { .. })));
        assert!(matches!(
            parse("automaton \"x.aut\""),
            Err(SpecError::Load { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let g = fixtures::fig1_liminf();
        let id = |n: &str| g.vertex_by_name(n).unwrap();
        let l = Lasso::new(vec![id("v1")], vec![id("v2"), id("v4")]);
        assert!(parse("payoff(1) >= 2 && payoff(2) = 2")
            .unwrap()
            .eval(&g, &l)
            .unwrap());
        assert!(!parse("payoff(1) > 2").unwrap().eval(&g, &l).unwrap());
    }
}

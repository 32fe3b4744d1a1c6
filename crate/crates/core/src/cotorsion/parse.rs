//! The term language, e.g. `ker_cmp(tensor(Z/2), T)` or `sum_p(Z/p)`.
//!
//! ```text
//! term    := group | "Z/p" | "Q"
//!          | lim(tower) | lim1(tower) | stage(tower)
//!          | ker_cmp(functor, tower) | coker_cmp(functor, tower)
//!          | sum_p(term) | sum_n(term) | sum(term, k)
//!          | ext(term, term) | quot(term) | summand_of(term) | retract(term, n)
//!          | bounded(n) | reduced_unbounded(p) | reduced_unbounded(mixed)
//! tower   := name | apply(functor, tower) | phi(functor, tower)
//! functor := tensor(group) | tor(group) | tensor(Z/p) | tor(Z/p)
//!          | lambda(n) | homology(n) | l1lambda2 | tor_self
//! ```
//!
//! `group` is a group expression such as `Z^2 + Z/4`.

use num_bigint::BigInt;

use super::{GroupTerm, IndexSet, SymFunctor, TorsionKind, TowerRef};
use crate::dsl::parse_group_expr;
use crate::error::{Error, Result};
use crate::functor::FunctorTag;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\''))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return self.error("expected a name");
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return self.error("expected a natural number");
        }
        let n = self.rest()[..len].parse::<u64>();
        match n {
            Ok(n) if n >= 1 => {
                self.pos += len;
                Ok(n)
            }
            _ => self.error("expected a positive number"),
        }
    }

    /// Text up to the next `,` or unmatched `)`.
    fn argument_text(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        let mut end = self.src.len();
        for (i, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    end = start + i;
                    break;
                }
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    end = start + i;
                    break;
                }
                _ => {}
            }
        }
        self.pos = end;
        (start, self.src[start..end].trim_end())
    }

    fn looks_like_group(&self) -> bool {
        let r = self.rest();
        r.starts_with('Z') && !r[1..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
    }

    /// A group expression or the family index cyclic `Z/p`.
    fn group_or_index(&mut self) -> Result<Option<crate::group::CanonicalForm>> {
        let (start, text) = self.argument_text();
        if text.replace(' ', "") == "Z/p" {
            return Ok(None);
        }
        match parse_group_expr(text) {
            Ok(p) => Ok(Some(p.canonical_form().clone())),
            Err(Error::Parse { column, message }) => Err(Error::Parse {
                column: self.src[..start].chars().count() + column,
                message,
            }),
            Err(Error::ZeroModulus { column }) => Err(Error::ZeroModulus {
                column: self.src[..start].chars().count() + column,
            }),
            Err(e) => Err(e),
        }
    }

    fn term(&mut self) -> Result<GroupTerm> {
        self.skip_ws();
        if self.looks_like_group() {
            return Ok(match self.group_or_index()? {
                Some(cf) => GroupTerm::FG(cf),
                None => GroupTerm::IndexCyclic,
            });
        }
        let name_pos = self.pos;
        let name = self.ident()?;
        if name == "Q" {
            return Ok(GroupTerm::Rationals);
        }
        self.expect('(')?;
        let t = match name {
            "lim" => GroupTerm::Lim(self.tower()?),
            "lim1" => GroupTerm::Lim1(self.tower()?),
            "stage" => GroupTerm::Stage(self.tower()?),
            "ker_cmp" | "coker_cmp" => {
                let f = self.functor()?;
                self.expect(',')?;
                let t = self.tower()?;
                if name == "ker_cmp" {
                    GroupTerm::KerComparison(f, t)
                } else {
                    GroupTerm::CokerComparison(f, t)
                }
            }
            "sum_p" => GroupTerm::SumFamily {
                body: Box::new(self.term()?),
                index: IndexSet::AllPrimes,
            },
            "sum_n" => GroupTerm::SumFamily {
                body: Box::new(self.term()?),
                index: IndexSet::AllNaturals,
            },
            "sum" => {
                let body = Box::new(self.term()?);
                self.expect(',')?;
                GroupTerm::SumFamily {
                    body,
                    index: IndexSet::Finite(self.natural()? as usize),
                }
            }
            "ext" => {
                let sub = Box::new(self.term()?);
                self.expect(',')?;
                GroupTerm::Extension {
                    sub,
                    quot: Box::new(self.term()?),
                }
            }
            "quot" => GroupTerm::QuotientOf(Box::new(self.term()?)),
            "summand_of" => GroupTerm::SummandOf(Box::new(self.term()?)),
            "retract" => {
                let ambient = Box::new(self.term()?);
                self.expect(',')?;
                GroupTerm::RetractTimesN {
                    ambient,
                    n: self.natural()?,
                }
            }
            "bounded" => GroupTerm::BoundedTorsion(BigInt::from(self.natural()?)),
            "reduced_unbounded" => {
                self.skip_ws();
                if self.rest().starts_with("mixed") {
                    self.pos += "mixed".len();
                    GroupTerm::ReducedUnboundedTorsion(TorsionKind::Mixed)
                } else {
                    GroupTerm::ReducedUnboundedTorsion(TorsionKind::Prime(self.natural()?))
                }
            }
            _ => {
                self.pos = name_pos;
                return self.error(format!("unknown constructor `{name}`"));
            }
        };
        self.expect(')')?;
        Ok(t)
    }

    fn functor(&mut self) -> Result<SymFunctor> {
        let name_pos = self.pos;
        let name = self.ident()?;
        match name {
            "l1lambda2" => return Ok(SymFunctor::Tag(FunctorTag::L1Lambda2)),
            "tor_self" => return Ok(SymFunctor::TorSelf),
            _ => {}
        }
        self.expect('(')?;
        let f = match name {
            "tensor" | "tor" => match (self.group_or_index()?, name) {
                (None, "tensor") => SymFunctor::TensorIndex,
                (None, _) => SymFunctor::TorIndex,
                (Some(cf), "tensor") => SymFunctor::Tag(FunctorTag::TensorWith(cf)),
                (Some(cf), _) => SymFunctor::Tag(FunctorTag::TorWith(cf)),
            },
            "lambda" => SymFunctor::Tag(FunctorTag::Lambda(self.natural()? as usize)),
            "homology" => {
                self.skip_ws();
                let n = if self.rest().starts_with('0') {
                    self.pos += 1;
                    0
                } else {
                    self.natural()? as usize
                };
                SymFunctor::Tag(FunctorTag::Homology(n))
            }
            _ => {
                self.pos = name_pos;
                return self.error(format!("unknown functor `{name}`"));
            }
        };
        self.expect(')')?;
        Ok(f)
    }

    fn tower(&mut self) -> Result<TowerRef> {
        let name = self.ident()?;
        match name {
            "apply" | "phi" => {
                self.expect('(')?;
                let f = self.functor()?;
                self.expect(',')?;
                let inner = Box::new(self.tower()?);
                self.expect(')')?;
                Ok(if name == "apply" {
                    TowerRef::Applied(f, inner)
                } else {
                    TowerRef::Phi(f, inner)
                })
            }
            _ => Ok(TowerRef::Named(name.to_string())),
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return self.error("unexpected trailing input");
        }
        Ok(())
    }
}

pub fn parse_term(text: &str) -> Result<GroupTerm> {
    let mut p = Parser { src: text, pos: 0 };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_tower_ref(text: &str) -> Result<TowerRef> {
    let mut p = Parser { src: text, pos: 0 };
    let t = p.tower()?;
    p.finish()?;
    Ok(t)
}

//! Evaluation of declarations and check expressions against the core engine.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use detachlab_core::expr::{join_polys, parse_poly_at};
use detachlab_core::families::{self, CiLimitFamily, FamilyKind, FamilyOverLine};
use detachlab_core::gb::{self, Ideal};
use detachlab_core::hilbert;
use detachlab_core::localgeom::{self, PointedIdeal};
use detachlab_core::sample::Sampler;
use detachlab_core::structures::{self, CaseData, CaseLabel, FiniteModule, ModuleTemplate, PointStructureSpec};
use detachlab_core::tangent;
use detachlab_core::{Coeff, Error, Polynomial, Ring, RingRef};

use crate::grammar::{Decl, Document, Expr};

/// A structure declaration, built: the kernel and the closed form, both in
/// global coordinates.
#[derive(Clone, Debug)]
pub struct BuiltStructure {
    pub case: CaseLabel,
    pub spec: PointStructureSpec,
    pub data: CaseData,
    pub base: Ideal,
    pub support: Vec<Coeff>,
    pub kernel: Ideal,
    pub closed: Ideal,
}

#[derive(Clone, Debug)]
pub enum Value {
    Ideal(Ideal),
    Int(i64),
    Bool(bool),
    Text(String),
    Poly(Polynomial),
    Point(Vec<Polynomial>),
    Matrix(Vec<Vec<Polynomial>>),
    Structure(Rc<BuiltStructure>),
    Module(Rc<FiniteModule>),
    Family(Rc<FamilyOverLine>),
    CiFamily(Rc<CiLimitFamily>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Ideal(_) => "ideal",
            Value::Int(_) => "integer",
            Value::Bool(_) => "boolean",
            Value::Text(_) => "text",
            Value::Poly(_) => "polynomial",
            Value::Point(_) => "point",
            Value::Matrix(_) => "matrix",
            Value::Structure(_) => "structure",
            Value::Module(_) => "module",
            Value::Family(_) | Value::CiFamily(_) => "family",
        }
    }
}

/// Ideals print as their reduced Gröbner basis.
pub fn render_ideal(i: &Ideal) -> String {
    format!("({})", join_polys(i.groebner()))
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Ideal(i) => f.write_str(&render_ideal(i)),
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => f.write_str(s),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Point(p) => write!(f, "({})", join_polys(p)),
            Value::Matrix(m) => {
                let rows: Vec<String> = m.iter().map(|r| join_polys(r)).collect();
                write!(f, "[{}]", rows.join("; "))
            }
            Value::Structure(s) => f.write_str(&render_ideal(&s.kernel)),
            Value::Module(m) => write!(f, "module of rank {}", m.rank()),
            Value::Family(fam) => f.write_str(&render_ideal(fam.total())),
            Value::CiFamily(c) => f.write_str(&render_ideal(c.family.total())),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Inconsistent(msg.into())
}

/// Name of an error variant, for `error(..)` checks.
pub fn error_kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(['(', ' ', '{']).next().unwrap_or("").to_string()
}

/// Split at top-level commas (and at `;` when `rows`).
fn split_top(text: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

pub struct Env<'d> {
    pub doc: &'d Document,
    pub ring: RingRef,
    pub geom: RingRef,
    pub seed: u64,
    pub samples: usize,
    cache: RefCell<HashMap<String, Result<Value, Error>>>,
    active: RefCell<Vec<String>>,
    draws: RefCell<u64>,
}

impl<'d> Env<'d> {
    pub fn new(doc: &'d Document, seed: u64, samples: usize) -> Result<Self, Error> {
        let ring = doc.ring.clone().ok_or_else(|| bad("no ring declared"))?;
        let geom = doc.geometric_ring().unwrap();
        Ok(Env { doc, ring, geom, seed, samples, cache: RefCell::default(), active: RefCell::default(), draws: RefCell::new(0) })
    }

    /// A fresh sampler; the stream depends only on the seed and on how many
    /// samplers were requested before.
    pub fn sampler(&self) -> Sampler {
        let mut d = self.draws.borrow_mut();
        *d += 1;
        Sampler::new(self.seed.wrapping_mul(6364136223846793005).wrapping_add(*d), 40)
    }

    pub fn lookup(&self, name: &str) -> Result<Value, Error> {
        if let Some(v) = self.cache.borrow().get(name) {
            return v.clone();
        }
        if self.active.borrow().iter().any(|n| n == name) {
            return Err(bad(format!("`{name}` is defined in terms of itself")));
        }
        let Some(stmt) = self.doc.find(name) else {
            if let Some(i) = self.ring.index_of(name) {
                return Ok(Value::Poly(Polynomial::var(&self.ring, i)));
            }
            return Err(bad(format!("unknown name `{name}`")));
        };
        self.active.borrow_mut().push(name.to_string());
        let v = self.build(&stmt.decl);
        self.active.borrow_mut().pop();
        self.cache.borrow_mut().insert(name.to_string(), v.clone());
        v
    }

    fn build(&self, decl: &Decl) -> Result<Value, Error> {
        match decl {
            Decl::Ideal(gens) => Ok(Value::Ideal(self.settle(Ideal::new(&self.ring, gens.clone())))),
            Decl::IdealExpr(e) => Ok(Value::Ideal(self.ideal(e)?)),
            Decl::Point(p) => Ok(Value::Point(p.clone())),
            Decl::Int(n) => Ok(Value::Int(*n)),
            Decl::Structure { on, case, support, data } => self.build_structure(on, *case, support.as_ref(), data),
            Decl::Module { template, support } => self.build_module(template, support.as_ref()),
            Decl::Family { kind, on, data } => self.build_family(*kind, on.as_deref(), data),
        }
    }

    /// Ideals free of the parameter move to the geometric ring.
    fn settle(&self, i: Ideal) -> Ideal {
        self.geom_ideal(&i).unwrap_or(i)
    }

    fn geom_poly(&self, p: &Polynomial) -> Result<Polynomial, Error> {
        match p.ring().param_index() {
            Some(t) if p.var_degree(t) == 0 => {
                let target = if **p.ring() == *self.ring { self.geom.clone() } else { p.ring().drop_vars(1 << t, detachlab_core::MonomialOrder::Grevlex) };
                Ok(p.specialize(t, &target.field().zero(), &target))
            }
            Some(_) => Err(bad(format!("{p} involves the parameter"))),
            None => Ok(p.clone()),
        }
    }

    fn geom_ideal(&self, i: &Ideal) -> Result<Ideal, Error> {
        if !i.ring().has_param() {
            return Ok(i.clone());
        }
        let gens = i.gens().iter().map(|g| self.geom_poly(g)).collect::<Result<Vec<_>, _>>()?;
        Ok(match gens.first() {
            Some(g) => Ideal::new(&g.ring().clone(), gens),
            None => Ideal::zero(&self.geom),
        })
    }

    fn raw_poly(&self, text: &str, line: usize, col: usize) -> Result<Polynomial, Error> {
        parse_poly_at(&self.ring, text, line, col)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, Error> {
        match e {
            Expr::Int(n) => Ok(Value::Int(*n)),
            Expr::Bool(b) => Ok(Value::Bool(*b)),
            Expr::Str(s) => Ok(Value::Text(s.clone())),
            Expr::Name(n) => self.lookup(n),
            Expr::Raw { text, line, col } => {
                let t = text.trim();
                if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                    let rows = split_top(inner, ';')
                        .iter()
                        .map(|r| split_top(r, ',').iter().map(|c| self.raw_poly(c, *line, *col)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    return Ok(Value::Matrix(rows));
                }
                if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                    let parts = split_top(inner, ',');
                    if parts.len() > 1 {
                        let coords = parts.iter().map(|c| self.raw_poly(c, *line, *col)).collect::<Result<Vec<_>, _>>()?;
                        return Ok(Value::Point(coords));
                    }
                }
                Ok(Value::Poly(self.raw_poly(t, *line, *col)?))
            }
            Expr::Call { name, args, .. } => self.call(name, args),
        }
    }

    pub fn ideal(&self, e: &Expr) -> Result<Ideal, Error> {
        match self.eval(e)? {
            Value::Ideal(i) => Ok(i),
            Value::Structure(s) => Ok(s.kernel.clone()),
            Value::Poly(p) => Ok(self.settle(Ideal::new(&self.ring, vec![p]))),
            v => Err(bad(format!("expected an ideal, found a {}", v.kind()))),
        }
    }

    fn poly(&self, e: &Expr) -> Result<Polynomial, Error> {
        match self.eval(e)? {
            Value::Poly(p) => Ok(p),
            Value::Int(n) => Ok(Polynomial::from_i64(&self.ring, n)),
            v => Err(bad(format!("expected a polynomial, found a {}", v.kind()))),
        }
    }

    fn int(&self, e: &Expr) -> Result<i64, Error> {
        match self.eval(e)? {
            Value::Int(n) => Ok(n),
            v => Err(bad(format!("expected an integer, found a {}", v.kind()))),
        }
    }

    fn point(&self, e: &Expr) -> Result<Vec<Polynomial>, Error> {
        match self.eval(e)? {
            Value::Point(p) => Ok(p),
            v => Err(bad(format!("expected a point, found a {}", v.kind()))),
        }
    }

    /// A point with constant coordinates, as field elements.
    fn coords(&self, e: &Expr) -> Result<Vec<Coeff>, Error> {
        let p = self.point(e)?;
        let zero = vec![self.ring.field().zero(); self.ring.nvars()];
        p.iter()
            .map(|c| if c.is_constant() || c.is_zero() { Ok(c.evaluate(&zero)) } else { Err(bad("point coordinates must be constants here")) })
            .collect()
    }

    fn matrix(&self, e: &Expr) -> Result<Vec<Vec<Polynomial>>, Error> {
        match self.eval(e)? {
            Value::Matrix(m) => Ok(m),
            v => Err(bad(format!("expected a matrix, found a {}", v.kind()))),
        }
    }

    fn family(&self, e: &Expr) -> Result<Rc<FamilyOverLine>, Error> {
        match self.eval(e)? {
            Value::Family(f) => Ok(f),
            Value::CiFamily(c) => Ok(Rc::new(c.family.clone())),
            v => Err(bad(format!("expected a family, found a {}", v.kind()))),
        }
    }

    fn module(&self, e: &Expr) -> Result<FiniteModule, Error> {
        match self.eval(e)? {
            Value::Module(m) => Ok((*m).clone()),
            Value::Structure(s) => Ok(s.spec.module.clone()),
            v => Err(bad(format!("expected a module, found a {}", v.kind()))),
        }
    }

    /// Both ideals in one ring.
    fn align(&self, a: Ideal, b: Ideal) -> Result<(Ideal, Ideal), Error> {
        if **a.ring() == **b.ring() {
            return Ok((a, b));
        }
        if a.ring().nvars() >= b.ring().nvars() {
            let b = families::move_ideal(&b, a.ring())?;
            Ok((a, b))
        } else {
            let a = families::move_ideal(&a, b.ring())?;
            Ok((a, b))
        }
    }

    fn pointed(&self, i: Ideal, p: &Expr, projective: bool) -> Result<PointedIdeal, Error> {
        let c = self.coords(p)?;
        let i = self.geom_ideal(&i)?;
        if projective {
            PointedIdeal::from_projective(&i, &c)
        } else {
            PointedIdeal::new(i, c)
        }
    }

    fn arity(name: &str, args: &[Expr], n: std::ops::RangeInclusive<usize>) -> Result<(), Error> {
        if n.contains(&args.len()) {
            Ok(())
        } else {
            Err(bad(format!("`{name}` takes {} to {} arguments, found {}", n.start(), n.end(), args.len())))
        }
    }

    fn call(&self, name: &str, args: &[Expr]) -> Result<Value, Error> {
        let projective_flag = |k: usize| matches!(args.get(k), Some(Expr::Name(n)) if n == "projective");
        let two_ideals = || -> Result<(Ideal, Ideal), Error> {
            Self::arity(name, args, 2..=2)?;
            self.align(self.ideal(&args[0])?, self.ideal(&args[1])?)
        };
        match name {
            "intersect" | "sum" if args.len() > 2 => {
                let mut acc = self.ideal(&args[0])?;
                for a in &args[1..] {
                    let (x, y) = self.align(acc, self.ideal(a)?)?;
                    acc = if name == "sum" { gb::sum(&x, &y) } else { gb::intersect(&x, &y) };
                }
                Ok(Value::Ideal(acc))
            }
            "intersect" | "sum" | "product" | "quotient" | "contains" | "equal" | "colength" => {
                let (a, b) = two_ideals()?;
                Ok(match name {
                    "intersect" => Value::Ideal(gb::intersect(&a, &b)),
                    "sum" => Value::Ideal(gb::sum(&a, &b)),
                    "product" => Value::Ideal(gb::product(&a, &b)),
                    "quotient" => Value::Ideal(gb::quotient(&a, &b)),
                    "contains" => Value::Bool(a.contains_ideal(&b)),
                    "equal" => Value::Bool(a.equals(&b)),
                    _ => Value::Int(hilbert::colength(&a, &b)? as i64),
                })
            }
            "saturate" => {
                let (a, b) = two_ideals()?;
                Ok(Value::Ideal(if b.num_gens() == 1 { gb::saturate_poly(&a, &b.gens()[0]) } else { gb::saturate(&a, &b) }))
            }
            "power" => {
                Self::arity(name, args, 2..=2)?;
                let a = self.ideal(&args[0])?;
                let n = self.int(&args[1])?;
                let mut out = Ideal::unit(a.ring());
                for _ in 0..n {
                    out = gb::product(&out, &a);
                }
                Ok(Value::Ideal(out))
            }
            "eliminate" => {
                Self::arity(name, args, 2..=16)?;
                let a = self.ideal(&args[0])?;
                let mut mask = 0u32;
                for v in &args[1..] {
                    let Expr::Name(n) = v else { return Err(bad("eliminate takes variable names")) };
                    let i = a.ring().index_of(n).ok_or_else(|| Error::UnknownVariable(n.clone()))?;
                    mask |= 1 << i;
                }
                Ok(Value::Ideal(gb::eliminate(&a, mask)))
            }
            "point" => {
                Self::arity(name, args, 1..=1)?;
                let p = self.point(&args[0])?;
                Ok(Value::Ideal(self.settle(Ideal::of_point(&self.ring, &p))))
            }
            "ppoint" => {
                Self::arity(name, args, 1..=1)?;
                let p = self.point(&args[0])?;
                Ok(Value::Ideal(self.settle(families::projective_point_ideal(&self.ring, &p))))
            }
            "irrelevant" => {
                Self::arity(name, args, 0..=0)?;
                Ok(Value::Ideal(Ideal::of_vars(&self.geom, self.geom.geom_mask())))
            }
            "closure" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Ideal(families::projective_closure(&self.ideal(&args[0])?)?))
            }
            "limit" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Ideal(families::flat_limit(&*self.family(&args[0])?)))
            }
            "fiber" => {
                Self::arity(name, args, 2..=2)?;
                let f = self.family(&args[0])?;
                let c = self.ring.field().from_i64(self.int(&args[1])?);
                Ok(Value::Ideal(f.fiber(&c)))
            }
            "basefiber" => {
                Self::arity(name, args, 2..=2)?;
                let Value::CiFamily(cf) = self.eval(&args[0])? else { return Err(bad("basefiber needs a cilimit family")) };
                let c = self.ring.field().from_i64(self.int(&args[1])?);
                Ok(Value::Ideal(cf.base_fiber(&c)))
            }
            "kernel" | "closed" => {
                Self::arity(name, args, 1..=1)?;
                let Value::Structure(s) = self.eval(&args[0])? else { return Err(bad(format!("{name} needs a structure"))) };
                Ok(Value::Ideal(if name == "kernel" { s.kernel.clone() } else { s.closed.clone() }))
            }
            "hilbert" => {
                Self::arity(name, args, 1..=1)?;
                let i = self.ideal(&args[0])?;
                let i = if i.is_homogeneous() { i } else { families::projective_closure(&i)? };
                Ok(Value::Text(hilbert::hilbert_polynomial(&i, false)?.polynomial.to_string()))
            }
            "hf" => {
                Self::arity(name, args, 2..=2)?;
                let i = self.ideal(&args[0])?;
                let v = hilbert::hilbert_function(&i, self.int(&args[1])?)?;
                Ok(Value::Int(v.try_into().map_err(|_| bad("value out of range"))?))
            }
            "degree" | "genus" => {
                Self::arity(name, args, 1..=1)?;
                let i = self.ideal(&args[0])?;
                let i = if i.is_homogeneous() { i } else { families::projective_closure(&i)? };
                let h = hilbert::hilbert_polynomial(&i, false)?;
                Ok(Value::Int(if name == "degree" {
                    h.degree.try_into().map_err(|_| bad("value out of range"))?
                } else {
                    h.genus.ok_or_else(|| bad("genus is defined for curves"))?
                }))
            }
            "length" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Int(hilbert::length(&self.ideal(&args[0])?)? as i64))
            }
            "gens" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Int(tangent::minimal_generators(&self.ideal(&args[0])?)?.len() as i64))
            }
            "local" => {
                Self::arity(name, args, 2..=3)?;
                let pi = self.pointed(self.ideal(&args[0])?, &args[1], projective_flag(2))?;
                Ok(Value::Int(localgeom::local_min_gens(&pi)? as i64))
            }
            "blowup" => {
                Self::arity(name, args, 2..=3)?;
                let pi = self.pointed(self.ideal(&args[0])?, &args[1], projective_flag(2))?;
                Ok(Value::Text(localgeom::blowup_fiber(&pi)?.description()))
            }
            "detachable" => {
                Self::arity(name, args, 3..=4)?;
                let pi = self.pointed(self.ideal(&args[0])?, &args[1], projective_flag(3))?;
                let n = self.int(&args[2])?;
                Ok(Value::Bool(localgeom::detachability_criterion(&pi, n as usize)?.detachable))
            }
            "hom" => {
                Self::arity(name, args, 1..=1)?;
                let i = self.geom_ideal(&self.ideal(&args[0])?)?;
                let h = tangent::hom_dim(&i)?;
                if !tangent::verify_hom_space(&i, &h) {
                    return Err(bad("a basis homomorphism fails a syzygy"));
                }
                Ok(Value::Int(h.dimension as i64))
            }
            "quotdim" => {
                Self::arity(name, args, 2..=2)?;
                Ok(Value::Int(tangent::quotient_dim(&self.ideal(&args[0])?, self.int(&args[1])? as u32) as i64))
            }
            "end" | "invertible" => {
                Self::arity(name, args, 1..=1)?;
                let e = tangent::end_dim(&self.module(&args[0])?, &mut self.sampler())?;
                Ok(if name == "end" { Value::Int(e.dimension as i64) } else { Value::Bool(e.contains_identity && e.invertible_witness) })
            }
            "modlength" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Int(self.module(&args[0])?.length()? as i64))
            }
            "classify" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Text(structures::classify_module(&self.module(&args[0])?)?.to_string()))
            }
            "oracle" => {
                Self::arity(name, args, 1..=2)?;
                match self.eval(&args[0])? {
                    Value::Structure(s) => {
                        let dmax = if args.len() == 2 { self.int(&args[1])? as u32 } else { 8 };
                        let same = s.kernel.equals(&s.closed);
                        let local = local_ideal(&s.kernel, &s.support);
                        Ok(Value::Bool(same && structures::agrees_with_linear_algebra(&s.spec, &local, dmax)?))
                    }
                    _ => {
                        let f = self.family(&args[0])?;
                        let dmax = if args.len() == 2 { self.int(&args[1])? as u32 } else { 3 };
                        Ok(Value::Bool(families::limit_oracle_agrees(&f, dmax, 2, 3)))
                    }
                }
            }
            "flat" => {
                Self::arity(name, args, 1..=1)?;
                let f = self.family(&args[0])?;
                Ok(Value::Bool(families::flatness_check(&f, self.samples, &mut self.sampler())?.verdict))
            }
            "verify" | "isolated" => {
                Self::arity(name, args, 4..=4)?;
                let f = self.family(&args[0])?;
                let target = self.ideal(&args[1])?;
                let x = self.ideal(&args[2])?;
                let n = self.int(&args[3])? as u64;
                let rep = families::verify_detachment(&f, &target, &x, n, self.samples, &mut self.sampler())?;
                Ok(Value::Bool(rep.passed() && (name == "verify" || rep.fibers_isolated())))
            }
            "ci" => {
                Self::arity(name, args, 2..=2)?;
                let Value::CiFamily(cf) = self.eval(&args[0])? else { return Err(bad("ci needs a cilimit family")) };
                let target = self.ideal(&args[1])?;
                Ok(Value::Bool(families::verify_ci_limit(&cf, &target, self.samples, &mut self.sampler())?.passed()))
            }
            "error" => {
                Self::arity(name, args, 1..=1)?;
                Ok(Value::Text(match self.eval(&args[0]) {
                    Ok(_) => "ok".into(),
                    Err(e) => error_kind(&e),
                }))
            }
            "distinct" => {
                let ideals = args.iter().map(|a| self.ideal(a)).collect::<Result<Vec<_>, _>>()?;
                for i in 0..ideals.len() {
                    for j in i + 1..ideals.len() {
                        if ideals[i].equals(&ideals[j]) {
                            return Ok(Value::Bool(false));
                        }
                    }
                }
                Ok(Value::Bool(true))
            }
            "arith" => {
                Self::arity(name, args, 1..=1)?;
                self.arith(&args[0]).map(Value::Int)
            }
            _ => Err(bad(format!("unknown operation `{name}`"))),
        }
    }

    /// Integer arithmetic over the `let` bindings.
    fn arith(&self, e: &Expr) -> Result<i64, Error> {
        let text = match e {
            Expr::Int(n) => return Ok(*n),
            Expr::Name(n) => return self.int(e).or_else(|_| Err(bad(format!("`{n}` is not an integer binding")))),
            Expr::Raw { text, .. } => text.clone(),
            Expr::Call { .. } => return self.int(e),
            _ => return Err(bad("arith takes an integer expression")),
        };
        let lets: Vec<(String, i64)> = self
            .doc
            .statements
            .iter()
            .filter_map(|s| match s.decl {
                Decl::Int(n) => Some((s.name.clone(), n)),
                _ => None,
            })
            .collect();
        let mut names: Vec<String> = lets.iter().map(|(n, _)| n.clone()).collect();
        names.push("arith_dummy_".into());
        let r = Ring::from_names(names, false, detachlab_core::CoefficientField::Rationals, detachlab_core::MonomialOrder::Grevlex)?;
        let p = detachlab_core::expr::parse_poly(&r, &text)?;
        let mut at: Vec<Coeff> = lets.iter().map(|(_, v)| r.field().from_i64(*v)).collect();
        at.push(r.field().zero());
        let v = p.evaluate(&at);
        let q = v.as_rational().ok_or_else(|| bad("not a rational value"))?;
        if !q.is_integer() {
            return Err(bad(format!("{text} is not an integer")));
        }
        i64::try_from(q.to_integer()).map_err(|_| bad("value out of range"))
    }

    fn data<'a>(&self, data: &'a [(String, Expr)], key: &str) -> Result<&'a Expr, Error> {
        data.iter().find(|(k, _)| k == key).map(|(_, e)| e).ok_or_else(|| bad(format!("missing data `{key}`")))
    }

    fn build_structure(&self, on: &str, case: CaseLabel, support: Option<&Expr>, data: &[(String, Expr)]) -> Result<Value, Error> {
        let geom = &self.geom;
        let base = self.geom_ideal(&self.ideal(&Expr::Name(on.into()))?)?;
        let mut gens = base.gens().to_vec();
        if data.iter().any(|(k, _)| k == "f" || k == "g") {
            let f = self.geom_poly(&self.poly(self.data(data, "f")?)?)?;
            let g = self.geom_poly(&self.poly(self.data(data, "g")?)?)?;
            gens = vec![f, g];
            if !Ideal::new(geom, gens.clone()).equals(&base) {
                return Err(bad("f and g must generate the base ideal"));
            }
        }
        let support = match support {
            Some(p) => self.coords(p)?,
            None => vec![geom.field().zero(); geom.nvars()],
        };
        let local = Ideal::new(geom, gens.iter().map(|g| g.translate(&support)).collect());
        let z = match data.iter().find(|(k, _)| k == "z") {
            Some((_, e)) => Some(self.geom_ideal(&self.ideal(e)?)?),
            None => None,
        };
        let (spec, cdata) = structures::case_with_structure(case, &local, z.as_ref())?;
        spec.check_well_defined()?;
        let kernel = structures::kernel_ideal(&spec)?;
        let lg = local.gens();
        let closed = structures::closed_form_ideal(case, &lg[0], &lg[1], &cdata)?;
        let back: Vec<Coeff> = support.iter().map(|c| geom.field().neg(c)).collect();
        let shift = |i: &Ideal| Ideal::new(geom, i.groebner().iter().map(|g| g.translate(&back)).collect());
        Ok(Value::Structure(Rc::new(BuiltStructure {
            case,
            kernel: shift(&kernel),
            closed: shift(&closed),
            spec,
            data: cdata,
            base,
            support,
        })))
    }

    fn build_module(&self, template: &Expr, support: Option<&Expr>) -> Result<Value, Error> {
        let geom = &self.geom;
        let Expr::Call { name, args, .. } = template else { return Err(bad("module template expected, e.g. bowtie(x, y, z, w)")) };
        let polys = |args: &[Expr]| -> Result<Vec<Polynomial>, Error> { args.iter().map(|a| self.geom_poly(&self.poly(a)?)).collect() };
        let t = match name.as_str() {
            "point" => ModuleTemplate::Point,
            "pair" => ModuleTemplate::PointPair,
            "structure" | "pointstructure" => {
                Self::arity(name, args, 1..=1)?;
                let z = self.geom_ideal(&self.ideal(&args[0])?)?;
                if name == "structure" {
                    ModuleTemplate::Structure(z)
                } else {
                    ModuleTemplate::PointPlusStructure(z)
                }
            }
            "dual" => {
                Self::arity(name, args, 2..=16)?;
                let p = polys(args)?;
                ModuleTemplate::DualFatPoint { plane: p[2..].to_vec(), x: p[0].clone(), y: p[1].clone() }
            }
            "bowtie" => {
                Self::arity(name, args, 4..=4)?;
                let p = polys(args)?;
                ModuleTemplate::Bowtie([p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()])
            }
            _ => return Err(bad(format!("unknown module template `{name}`"))),
        };
        let support = match support {
            Some(p) => self.coords(p)?,
            None => vec![geom.field().zero(); geom.nvars()],
        };
        Ok(Value::Module(Rc::new(structures::build_module(geom, &t, support)?)))
    }

    fn build_family(&self, kind: FamilyKind, on: Option<&str>, data: &[(String, Expr)]) -> Result<Value, Error> {
        let ring = &self.ring;
        if !ring.has_param() {
            return Err(bad("families need a ring with `param`"));
        }
        let base = || -> Result<Ideal, Error> {
            let on = on.ok_or_else(|| bad(format!("{kind} families need `on <ideal>`")))?;
            self.geom_ideal(&self.ideal(&Expr::Name(on.into()))?)
        };
        let path = |key: &str| -> Result<Vec<Polynomial>, Error> { self.point(self.data(data, key)?) };
        let poly = |key: &str| -> Result<Polynomial, Error> { self.poly(self.data(data, key)?)?.embed_by_name(ring) };
        let fam = match kind {
            FamilyKind::Given => {
                let total = self.ideal(self.data(data, "total")?)?;
                let total = families::move_ideal(&total, ring)?;
                let projective = match data.iter().find(|(k, _)| k == "projective") {
                    Some((_, e)) => matches!(self.eval(e)?, Value::Bool(true)),
                    None => total.gens().iter().all(|g| g.is_homogeneous_in(ring.geom_mask())),
                };
                FamilyOverLine::new(total, projective)?
            }
            FamilyKind::MovePoint => families::mult1_move_point(ring, &base()?, &path("path")?)?,
            FamilyKind::PullOne => {
                let y1 = self.geom_ideal(&self.ideal(self.data(data, "y1")?)?)?;
                families::pullone(ring, &base()?, &y1, &path("path")?)?
            }
            FamilyKind::Curvilinear => {
                let paths = data.iter().filter(|(k, _)| k == "path").map(|(_, e)| self.point(e)).collect::<Result<Vec<_>, _>>()?;
                families::curvilinear(ring, &base()?, &paths)?
            }
            FamilyKind::CaseD => {
                let p = path("path")?;
                if p.len() != 2 {
                    return Err(bad("case-d paths are (a, b)"));
                }
                families::case_d(ring, &poly("f")?, &poly("g")?, &p[0], &p[1])?
            }
            FamilyKind::CaseE => {
                let p = path("path")?;
                if p.len() != 4 {
                    return Err(bad("case-e paths are (a, b, c, d)"));
                }
                families::case_e(ring, &poly("f")?, &poly("g")?, [&p[0], &p[1], &p[2], &p[3]])?
            }
            FamilyKind::Hypersurface => {
                let z = self.geom_ideal(&self.ideal(self.data(data, "z")?)?)?;
                families::hypersurface(ring, &poly("f")?, &z, &path("shift")?)?
            }
            FamilyKind::CiLimit => {
                let psi0 = self.matrix(self.data(data, "psi0")?)?;
                let psi1 = self.matrix(self.data(data, "psi1")?)?;
                let lift = path("lift")?;
                let cf = families::ci_limit_family(ring, &psi0, &psi1, &lift, &path("path")?)?;
                return Ok(Value::CiFamily(Rc::new(cf)));
            }
        };
        Ok(Value::Family(Rc::new(fam)))
    }
}

/// The ideal in coordinates centred at `support`.
fn local_ideal(i: &Ideal, support: &[Coeff]) -> Ideal {
    Ideal::new(i.ring(), i.gens().iter().map(|g| g.translate(support)).collect())
}

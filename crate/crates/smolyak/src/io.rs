//! CSV / JSON-lines tables and file formats for schemes, polynomials,
//! expansions, grids and cubature rules. Rationals are written as
//! `"num/den"` strings.

use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use smolyak_core::cubature::CubatureRule;
use smolyak_core::tensor::strides;
use smolyak_core::{Basis, GridPoint, LaurentPoly, LevelBlock, MultiIndex, QIScheme, Rational, SparseExpansion};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (csv|json)")),
        }
    }
}

/// `"num/den"`, with the denominator always present.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or an integer.
pub fn parse_rational(s: &str) -> CliResult<Rational> {
    let s = s.trim();
    let bad = || CliError::Spec(format!("not a rational number: '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// A JSON number; non-finite values become the strings `inf`, `-inf`, `nan`.
pub fn number(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("nan".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

/// A rectangular table with named columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(header: I) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write<W: Write>(&self, out: W, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json_lines(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json_lines<W: Write>(&self, mut out: W) -> CliResult<()> {
        for row in &self.rows {
            let obj: serde_json::Map<String, Value> =
                self.header.iter().cloned().zip(row.iter().cloned()).collect();
            serde_json::to_writer(&mut out, &obj)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_string(&self, format: Format) -> CliResult<String> {
        let mut buf = Vec::new();
        self.write(&mut buf, format)?;
        Ok(String::from_utf8(buf).expect("utf-8 output"))
    }

    /// Reads a CSV table; every cell becomes a JSON string.
    pub fn read_csv<R: Read>(input: R) -> CliResult<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.iter().map(String::from).collect();
        let mut table = Table { header, rows: Vec::new() };
        for rec in r.records() {
            table.rows.push(rec?.iter().map(|s| Value::String(s.to_string())).collect());
        }
        Ok(table)
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// JSON form of a quasi-interpolation scheme: `λ(0), λ(1), …, λ(μ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub r: u32,
    pub lambda: Vec<String>,
}

impl SchemeFile {
    pub fn from_scheme(s: &QIScheme) -> Self {
        Self { r: s.r(), lambda: s.lambda_half().iter().map(rational_string).collect() }
    }

    pub fn to_scheme(&self) -> CliResult<QIScheme> {
        let half = self.lambda.iter().map(|s| parse_rational(s)).collect::<CliResult<Vec<_>>>()?;
        Ok(QIScheme::from_half(self.r, &half)?)
    }
}

pub fn read_scheme_json(text: &str) -> CliResult<QIScheme> {
    let file: SchemeFile = serde_json::from_str(text)?;
    file.to_scheme()
}

pub fn write_scheme_json(s: &QIScheme) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(&SchemeFile::from_scheme(s))?)
}

/// JSON form of a Laurent polynomial: `[exponent, "num/den"]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentFile {
    pub terms: Vec<(i64, String)>,
}

pub fn laurent_to_json(p: &LaurentPoly) -> CliResult<String> {
    let file = LaurentFile { terms: p.terms().map(|(e, c)| (e, rational_string(c))).collect() };
    Ok(serde_json::to_string(&file)?)
}

pub fn laurent_from_json(text: &str) -> CliResult<LaurentPoly> {
    let file: LaurentFile = serde_json::from_str(text)?;
    let terms = file
        .terms
        .iter()
        .map(|(e, c)| Ok((*e, parse_rational(c)?)))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(LaurentPoly::from_terms(terms))
}

fn basis_name(b: Basis) -> String {
    match b {
        Basis::Faber => "faber".into(),
        Basis::BSpline { r } => format!("bspline:{r}"),
    }
}

fn parse_basis(s: &str) -> CliResult<Basis> {
    if s == "faber" {
        return Ok(Basis::Faber);
    }
    s.strip_prefix("bspline:")
        .and_then(|r| r.parse().ok())
        .filter(|&r: &u32| r > 0)
        .map(|r| Basis::BSpline { r })
        .ok_or_else(|| CliError::Spec(format!("unknown basis '{s}'")))
}

/// One row per nonzero coefficient: `basis, k1..kd, s1..sd, coefficient`.
pub fn expansion_table(e: &SparseExpansion) -> Table {
    let d = e.dim();
    let mut header = vec!["basis".to_string()];
    header.extend((1..=d).map(|j| format!("k{j}")));
    header.extend((1..=d).map(|j| format!("s{j}")));
    header.push("coefficient".into());
    let mut t = Table::new(header);
    let name = basis_name(e.basis());
    for (k, s, c) in e.terms() {
        let mut row = vec![Value::String(name.clone())];
        row.extend(k.levels().iter().map(|&l| Value::from(l)));
        row.extend(s.iter().map(|&x| Value::from(x)));
        row.push(number(c));
        t.push(row);
    }
    t
}

/// Inverse of [`expansion_table`] for a table read back from CSV.
pub fn expansion_from_table(t: &Table) -> CliResult<SparseExpansion> {
    let width = t.header.len();
    if width < 4 || (width - 2) % 2 != 0 {
        return Err(CliError::Spec("expansion table has the wrong number of columns".into()));
    }
    let d = (width - 2) / 2;
    let parse_u = |v: &Value| -> CliResult<usize> {
        cell_text(v).parse().map_err(|_| CliError::Spec(format!("bad integer '{}'", cell_text(v))))
    };
    let mut basis = None;
    let mut blocks: Vec<LevelBlock> = Vec::new();
    let mut probe = SparseExpansion::new(d, Basis::Faber);
    for row in &t.rows {
        let b = parse_basis(&cell_text(&row[0]))?;
        if basis.is_none() {
            basis = Some(b);
            probe = SparseExpansion::new(d, b);
        } else if basis != Some(b) {
            return Err(CliError::Spec("mixed bases in one expansion".into()));
        }
        let k = MultiIndex::new(row[1..=d].iter().map(|v| parse_u(v).map(|x| x as u32)).collect::<CliResult<_>>()?);
        let s: Vec<usize> = row[d + 1..=2 * d].iter().map(parse_u).collect::<CliResult<_>>()?;
        let c: f64 = cell_text(&row[2 * d + 1])
            .parse()
            .map_err(|_| CliError::Spec("bad coefficient".into()))?;
        let shape = probe.shape(&k);
        if s.iter().zip(&shape).any(|(a, n)| a >= n) {
            return Err(CliError::Spec(format!("shift {s:?} out of range at level {:?}", k.levels())));
        }
        let st = strides(&shape);
        let flat: usize = s.iter().zip(&st).map(|(a, b)| a * b).sum();
        let block = match blocks.iter_mut().find(|b| b.level == k) {
            Some(b) => b,
            None => {
                blocks.push(LevelBlock { level: k, coeffs: vec![0.0; shape.iter().product()] });
                blocks.last_mut().expect("just pushed")
            }
        };
        block.coeffs[flat] = c;
    }
    let mut e = SparseExpansion::new(d, basis.unwrap_or(Basis::Faber));
    for b in blocks {
        e.push_block(b)?;
    }
    Ok(e)
}

/// One row per generating pair `(k, s)` of each grid point:
/// `x1..xd` (decimal), `x1_exact..xd_exact`, `k1..kd`, `s1..sd`.
pub fn grid_table(points: &[GridPoint], d: usize) -> Table {
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.extend((1..=d).map(|j| format!("x{j}_exact")));
    header.extend((1..=d).map(|j| format!("k{j}")));
    header.extend((1..=d).map(|j| format!("s{j}")));
    let mut t = Table::new(header);
    for p in points {
        for (k, s) in p.hierarchical_origins() {
            let mut row: Vec<Value> = p.coords.iter().map(|c| number(c.to_f64())).collect();
            row.extend(p.coords.iter().map(|c| Value::String(c.to_string())));
            row.extend(k.levels().iter().map(|&l| Value::from(l)));
            row.extend(s.iter().map(|&x| Value::from(x)));
            t.push(row);
        }
    }
    t
}

/// `x1..xd`, `x1_exact..xd_exact`, `weight`, `weight_exact`.
pub fn rule_table(rule: &CubatureRule, d: usize) -> Table {
    let mut header: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    header.extend((1..=d).map(|j| format!("x{j}_exact")));
    header.push("weight".into());
    header.push("weight_exact".into());
    let mut t = Table::new(header);
    for ((p, w), wf) in rule.points.iter().zip(&rule.weights).zip(&rule.weights_f64) {
        let mut row: Vec<Value> = p.iter().map(|c| number(c.to_f64())).collect();
        row.extend(p.iter().map(|c| Value::String(c.to_string())));
        row.push(number(*wf));
        row.push(Value::String(rational_string(w)));
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use smolyak_core::faber::recover;
    use smolyak_core::GridVariant;

    #[test]
    fn rationals_round_trip() {
        for s in ["1/3", "-7/12", "0/1", "461760/460800"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&rational_string(&q)).unwrap(), q);
        }
        assert_eq!(rational_string(&parse_rational("4").unwrap()), "4/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn schemes_round_trip() {
        for name in ["linear", "cubic", "quintic"] {
            let s = QIScheme::builtin(name).unwrap();
            let back = read_scheme_json(&write_scheme_json(&s).unwrap()).unwrap();
            assert_eq!(back, s);
        }
        assert!(read_scheme_json(r#"{"r": 2, "lambda": ["1/2", "1/4"]}"#).is_err());
    }

    #[test]
    fn laurent_round_trip() {
        let p = QIScheme::quintic().p_even_star().clone();
        assert_eq!(laurent_from_json(&laurent_to_json(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn expansion_round_trip_through_csv() {
        let rec = recover(|x: &[f64]| (x[0] * 7.0).sin() + x[1] * x[1], 2, 4, GridVariant::Full).unwrap();
        let text = expansion_table(&rec.expansion).to_string(Format::Csv).unwrap();
        let back = expansion_from_table(&Table::read_csv(text.as_bytes()).unwrap()).unwrap();
        for x in [[0.1, 0.2], [0.77, 0.31], [0.5, 0.999]] {
            assert_eq!(back.evaluate(&x), rec.expansion.evaluate(&x));
        }
    }

    #[test]
    fn non_finite_values_are_spelled_out() {
        let mut t = Table::new(["a", "b", "c"]);
        t.push(vec![number(f64::NAN), number(f64::INFINITY), Value::String("1/2".into())]);
        assert_eq!(t.to_string(Format::Json).unwrap(), "{\"a\":\"nan\",\"b\":\"inf\",\"c\":\"1/2\"}\n");
        assert_eq!(t.to_string(Format::Csv).unwrap(), "a,b,c\nnan,inf,1/2\n");
    }
}

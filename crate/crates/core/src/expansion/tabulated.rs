//! Arithmetical functions given by a table of values on `1..=len`, stored
//! as CSV with header `n,value`. Values are exact decimals (`-1.25`,
//! `3e-2`) or rationals (`p/q`).

use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> TabulatedFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, n: u64) -> Result<T> {
        if n == 0 || n > self.len() {
            return Err(Error::Evaluation {
                n,
                reason: format!("outside tabulated range 1..={}", self.len()),
            });
        }
        Ok(self.values[n as usize - 1].clone())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "value" {
            return Err(Error::Parse(format!("expected header `n,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut values = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let n: u64 = record[0]
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad index `{}`", line + 2, &record[0])))?;
            if n != values.len() as u64 + 1 {
                return Err(Error::Parse(format!("row {}: expected n = {}, got {n}", line + 2, values.len() + 1)));
            }
            let q = parse_exact(&record[1]).map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))?;
            values.push(T::from_rational(&q));
        }
        Ok(Self { values })
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["n", "value"]).map_err(io)?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_literal()]).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Parses `p/q` or a decimal literal with optional exponent into an exact rational.
pub fn parse_exact(literal: &str) -> Result<BigRational> {
    let literal = literal.trim();
    let bad = || Error::Parse(format!("not an exact literal: `{literal}`"));
    if let Some((p, q)) = literal.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match literal.find(['e', 'E']) {
        Some(i) => (&literal[..i], literal[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (literal, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    if negative {
        q = -q;
    }
    Ok(q)
}

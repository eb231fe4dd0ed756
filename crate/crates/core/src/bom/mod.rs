//! Parts catalog, bills of materials and prices.
//!
//! The catalog is a CSV with one row per part:
//! `code,name,color,price_brickowl,price_bricklink`, then one count column per
//! model and a final `set` column. A closing row with code `total` states the
//! per-model part totals and, in its price cells, the price of the whole set;
//! every stated total is checked on load.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::poly::Rat;

const SHIPPED: &str = include_str!("../../data/parts.csv");

/// Not in the catalog: the pen refill and the paper, whose prices vary too widely.
pub const EXCLUDED_NOTE: &str =
    "pen refill and paper not included; refills cost from about 0.2 to over 3 EUR";

const FIXED_COLUMNS: [&str; 5] = ["code", "name", "color", "price_brickowl", "price_bricklink"];
const SET_COLUMN: &str = "set";
const TOTAL_ROW: &str = "total";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Vendor {
    BrickOwl,
    BrickLink,
}

impl FromStr for Vendor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "brickowl" => Ok(Vendor::BrickOwl),
            "bricklink" => Ok(Vendor::BrickLink),
            _ => Err(format!(
                "unknown vendor `{s}` (expected brickowl or bricklink)"
            )),
        }
    }
}

impl fmt::Display for Vendor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Vendor::BrickOwl => "brickowl",
            Vendor::BrickLink => "bricklink",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Part {
    pub code: u32,
    pub name: String,
    pub color: String,
    pub price_brickowl: Rat,
    pub price_bricklink: Rat,
}

impl Part {
    pub fn price(&self, vendor: Vendor) -> &Rat {
        match vendor {
            Vendor::BrickOwl => &self.price_brickowl,
            Vendor::BrickLink => &self.price_bricklink,
        }
    }
}

/// Part code to count; only positive counts are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShoppingList(pub BTreeMap<u32, u32>);

impl ShoppingList {
    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn count(&self, code: u32) -> u32 {
        self.0.get(&code).copied().unwrap_or(0)
    }

    fn add(&mut self, code: u32, n: u32) {
        if n > 0 {
            *self.0.entry(code).or_default() += n;
        }
    }

    fn raise_to(&mut self, code: u32, n: u32) {
        if n > 0 {
            let e = self.0.entry(code).or_default();
            *e = (*e).max(n);
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BomError {
    #[error("catalog line {line}: {msg}")]
    Parse { line: u64, msg: String },
    #[error("{row}: table says {stated} parts, the counts add up to {computed}")]
    TotalMismatch {
        row: String,
        stated: u32,
        computed: u32,
    },
    #[error("set count of part {code} is {stated}, the largest model count is {computed}")]
    SetMismatch {
        code: u32,
        stated: u32,
        computed: u32,
    },
    #[error("set price at {vendor} is stated as {stated}, parts add up to {computed}")]
    PriceMismatch {
        vendor: Vendor,
        stated: String,
        computed: String,
    },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("unknown part {0}")]
    UnknownPart(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub parts: Vec<Part>,
    /// Per model, in column order.
    pub requirements: Vec<(String, ShoppingList)>,
    /// The table's own set row.
    pub set: ShoppingList,
}

/// Parses a plain decimal such as `0.0084` exactly.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let numer: BigInt = format!("{whole}{frac}").parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let r = Rat::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Euro amount rounded half up to four decimals.
pub fn format_price(p: &Rat) -> String {
    let scaled = p * Rat::from_integer(BigInt::from(10_000));
    let sign = if scaled.is_negative() { "-" } else { "" };
    let units = (scaled.abs() + Rat::new(BigInt::from(1), BigInt::from(2)))
        .floor()
        .to_integer();
    let s = format!("{:05}", units);
    let (int, frac) = s.split_at(s.len() - 4);
    format!("{sign}{int}.{frac}")
}

fn parse_err(line: u64, msg: impl Into<String>) -> BomError {
    BomError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn catalog_load(text: &str) -> Result<Catalog, BomError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if headers.len() < FIXED_COLUMNS.len() + 1 || headers.iter().take(5).ne(FIXED_COLUMNS) {
        return Err(parse_err(
            1,
            format!("header must start with {}", FIXED_COLUMNS.join(",")),
        ));
    }
    if headers.iter().next_back() != Some(SET_COLUMN) {
        return Err(parse_err(1, "last column must be `set`"));
    }
    let models: Vec<String> = headers
        .iter()
        .skip(FIXED_COLUMNS.len())
        .take(headers.len() - FIXED_COLUMNS.len() - 1)
        .map(str::to_string)
        .collect();

    let mut parts: Vec<Part> = Vec::new();
    let mut counts: Vec<Vec<u32>> = Vec::new();
    let mut total_row: Option<(u64, Vec<u32>, Rat, Rat)> = None;
    for rec in reader.records() {
        let rec =
            rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if total_row.is_some() {
            return Err(parse_err(line, "rows after the total row"));
        }
        let num = |i: usize| -> Result<u32, BomError> {
            rec[i].parse().map_err(|_| {
                parse_err(
                    line,
                    format!("column {}: `{}` is not a count", &headers[i], &rec[i]),
                )
            })
        };
        let price = |i: usize| -> Result<Rat, BomError> {
            let p = parse_decimal(&rec[i]).ok_or_else(|| {
                parse_err(
                    line,
                    format!("column {}: `{}` is not a price", &headers[i], &rec[i]),
                )
            })?;
            if p.is_negative() {
                return Err(parse_err(
                    line,
                    format!("column {}: negative price", &headers[i]),
                ));
            }
            Ok(p)
        };
        let row_counts = (FIXED_COLUMNS.len()..rec.len())
            .map(num)
            .collect::<Result<Vec<u32>, _>>()?;
        if &rec[0] == TOTAL_ROW {
            total_row = Some((line, row_counts, price(3)?, price(4)?));
            continue;
        }
        let code: u32 = rec[0]
            .parse()
            .map_err(|_| parse_err(line, format!("`{}` is not a part code", &rec[0])))?;
        if parts.iter().any(|p| p.code == code) {
            return Err(parse_err(line, format!("part {code} listed twice")));
        }
        parts.push(Part {
            code,
            name: rec[1].to_string(),
            color: rec[2].to_string(),
            price_brickowl: price(3)?,
            price_bricklink: price(4)?,
        });
        counts.push(row_counts);
    }
    if parts.is_empty() {
        return Err(parse_err(1, "no parts"));
    }
    let (_, stated, owl, link) = total_row.ok_or_else(|| parse_err(1, "missing total row"))?;

    let mut requirements: Vec<(String, ShoppingList)> = models
        .iter()
        .map(|m| (m.clone(), ShoppingList::default()))
        .collect();
    let mut set = ShoppingList::default();
    for (part, row) in parts.iter().zip(&counts) {
        for (k, (_, list)) in requirements.iter_mut().enumerate() {
            list.add(part.code, row[k]);
        }
        set.add(part.code, row[models.len()]);
    }
    let catalog = Catalog {
        parts,
        requirements,
        set,
    };

    for (k, (name, list)) in catalog.requirements.iter().enumerate() {
        if list.total() != stated[k] {
            return Err(BomError::TotalMismatch {
                row: name.clone(),
                stated: stated[k],
                computed: list.total(),
            });
        }
    }
    if catalog.set.total() != stated[models.len()] {
        return Err(BomError::TotalMismatch {
            row: SET_COLUMN.into(),
            stated: stated[models.len()],
            computed: catalog.set.total(),
        });
    }
    let union = catalog.set_union_of(catalog.requirements.iter().map(|(_, l)| l));
    for p in &catalog.parts {
        if union.count(p.code) != catalog.set.count(p.code) {
            return Err(BomError::SetMismatch {
                code: p.code,
                stated: catalog.set.count(p.code),
                computed: union.count(p.code),
            });
        }
    }
    for (vendor, stated) in [(Vendor::BrickOwl, owl), (Vendor::BrickLink, link)] {
        let computed = catalog.price(&catalog.set, vendor)?;
        if computed != stated {
            return Err(BomError::PriceMismatch {
                vendor,
                stated: stated.to_string(),
                computed: computed.to_string(),
            });
        }
    }
    Ok(catalog)
}

impl Catalog {
    /// The catalog compiled into the crate.
    pub fn shipped() -> Catalog {
        catalog_load(SHIPPED).expect("shipped catalog is consistent")
    }

    pub fn model_names(&self) -> impl Iterator<Item = &str> {
        self.requirements.iter().map(|(m, _)| m.as_str())
    }

    pub fn part(&self, code: u32) -> Option<&Part> {
        self.parts.iter().find(|p| p.code == code)
    }

    pub fn bom(&self, model: &str) -> Result<&ShoppingList, BomError> {
        self.requirements
            .iter()
            .find(|(m, _)| m == model)
            .map(|(_, l)| l)
            .ok_or_else(|| BomError::UnknownModel(model.to_string()))
    }

    fn set_union_of<'a>(&self, lists: impl Iterator<Item = &'a ShoppingList>) -> ShoppingList {
        let mut out = ShoppingList::default();
        for l in lists {
            for (&code, &n) in &l.0 {
                out.raise_to(code, n);
            }
        }
        out
    }

    /// Parts for building the models one after another from a single kit.
    pub fn set_union(&self, models: &[&str]) -> Result<ShoppingList, BomError> {
        let lists = models
            .iter()
            .map(|m| self.bom(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.set_union_of(lists.into_iter()))
    }

    /// Parts for building all the models at the same time.
    pub fn set_sum(&self, models: &[&str]) -> Result<ShoppingList, BomError> {
        let mut out = ShoppingList::default();
        for m in models {
            for (&code, &n) in &self.bom(m)?.0 {
                out.add(code, n);
            }
        }
        Ok(out)
    }

    pub fn price(&self, list: &ShoppingList, vendor: Vendor) -> Result<Rat, BomError> {
        let mut sum = Rat::zero();
        for (&code, &n) in &list.0 {
            let part = self.part(code).ok_or(BomError::UnknownPart(code))?;
            sum += part.price(vendor) * Rat::from_integer(BigInt::from(n));
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(s: &str) -> Rat {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(dec("0.0084") * Rat::from_integer(3.into()), dec("0.0252"));
        assert_eq!(dec("12"), Rat::from_integer(12.into()));
        assert_eq!(dec("-.5"), Rat::new((-1).into(), 2.into()));
        assert_eq!(parse_decimal("1e3"), None);
        assert_eq!(parse_decimal("."), None);
    }

    #[test]
    fn price_formatting() {
        assert_eq!(format_price(&dec("1.123")), "1.1230");
        assert_eq!(format_price(&dec("0.4048")), "0.4048");
        assert_eq!(format_price(&dec("0.00005")), "0.0001");
        assert_eq!(format_price(&Rat::zero()), "0.0000");
    }

    #[test]
    fn shipped_catalog_loads() {
        let c = Catalog::shipped();
        assert_eq!(c.parts.len(), 8);
        assert_eq!(c.requirements.len(), 5);
        assert_eq!(c.set.total(), 24);
    }

    #[test]
    fn wrong_total_names_the_model() {
        let bad = SHIPPED.replace("total,,,1.123,0.4048,3,12,", "total,,,1.123,0.4048,3,13,");
        assert_eq!(
            catalog_load(&bad),
            Err(BomError::TotalMismatch {
                row: "chebyshev".into(),
                stated: 13,
                computed: 12
            })
        );
    }

    #[test]
    fn empty_and_malformed() {
        assert!(matches!(catalog_load(""), Err(BomError::Parse { .. })));
        let bad = SHIPPED.replace("32278,Beam 15,red,0.19", "32278,Beam 15,red,abc");
        assert!(matches!(
            catalog_load(&bad),
            Err(BomError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn wrong_set_price() {
        let bad = SHIPPED.replace("total,,,1.123,", "total,,,1.124,");
        assert!(matches!(
            catalog_load(&bad),
            Err(BomError::PriceMismatch {
                vendor: Vendor::BrickOwl,
                ..
            })
        ));
    }

    #[test]
    fn union_versus_sum() {
        let c = Catalog::shipped();
        let u = c.set_union(&["chebyshev", "hart_inversor"]).unwrap();
        assert_eq!(u.count(2780), 8);
        let s = c.set_sum(&["chebyshev", "hart_inversor"]).unwrap();
        assert_eq!(s.count(2780), 13);
        assert_eq!(s.total(), 26);
        assert_eq!(
            c.set_union(&["watt", "nope"]),
            Err(BomError::UnknownModel("nope".into()))
        );
    }

    #[test]
    fn unknown_part_has_no_price() {
        let c = Catalog::shipped();
        let mut l = ShoppingList::default();
        l.add(1, 1);
        assert_eq!(
            c.price(&l, Vendor::BrickLink),
            Err(BomError::UnknownPart(1))
        );
        assert_eq!(
            c.price(&ShoppingList::default(), Vendor::BrickOwl),
            Ok(Rat::zero())
        );
    }
}

//! Observations, datasets and beliefs, plus JSON/CSV ingestion.
//!
//! Prices and demands are held as exact rationals. Observation and state
//! indices are 0-based in the API and 1-based in every serialized form and
//! error message.

use std::io::Read;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    prices: Vec<Rational>,
    demand: Vec<Rational>,
}

impl Observation {
    /// Validates `p ≫ 0`, `x ≥ 0` and equal lengths. Errors name the
    /// observation as 0; [`Dataset::new`] renumbers them.
    pub fn new(prices: Vec<Rational>, demand: Vec<Rational>) -> Result<Self> {
        Self::checked(prices, demand, 0)
    }

    fn checked(prices: Vec<Rational>, demand: Vec<Rational>, number: usize) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::validation(number, None, "no states"));
        }
        if prices.len() != demand.len() {
            return Err(Error::validation(
                number,
                None,
                format!("{} prices but {} demand entries", prices.len(), demand.len()),
            ));
        }
        if let Some(s) = prices.iter().position(|p| !p.is_positive()) {
            return Err(Error::validation(number, Some(s + 1), "price must be strictly positive"));
        }
        if let Some(s) = demand.iter().position(|x| x.is_negative()) {
            return Err(Error::validation(number, Some(s + 1), "demand must be nonnegative"));
        }
        Ok(Self { prices, demand })
    }

    pub fn prices(&self) -> &[Rational] {
        &self.prices
    }

    pub fn demand(&self) -> &[Rational] {
        &self.demand
    }

    pub fn num_states(&self) -> usize {
        self.prices.len()
    }

    /// The implied budget `p · x`.
    pub fn wealth(&self) -> Rational {
        dot(&self.prices, &self.demand)
    }

    /// The unique state with positive demand, if the demand is a corner.
    pub fn corner_state(&self) -> Option<usize> {
        let mut positive = self.demand.iter().enumerate().filter(|(_, x)| x.is_positive());
        let (state, _) = positive.next()?;
        positive.next().is_none().then_some(state)
    }

    pub fn kind(&self) -> DemandKind {
        match self.corner_state() {
            Some(s) => DemandKind::Corner(s),
            None if self.demand.iter().all(Zero::is_zero) => DemandKind::Zero,
            None => DemandKind::Diversified,
        }
    }

    /// The same demand at prices multiplied by `factor`.
    pub fn with_scaled_prices(&self, factor: &Rational) -> Result<Self> {
        Self::new(self.prices.iter().map(|p| p * factor).collect(), self.demand.clone())
    }

    /// Reorders states so that new state `i` is old state `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            prices: order.iter().map(|&s| self.prices[s].clone()).collect(),
            demand: order.iter().map(|&s| self.demand[s].clone()).collect(),
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (p, x)| acc + p * x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "state")]
pub enum DemandKind {
    Corner(usize),
    Diversified,
    /// All-zero demand: accepted, but not a corner.
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    states: Vec<String>,
    observations: Vec<Observation>,
}

impl Dataset {
    pub fn new(states: Vec<String>, observations: Vec<Observation>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::validation(0, None, "dataset needs at least one state"));
        }
        if observations.is_empty() {
            return Err(Error::validation(0, None, "dataset needs at least one observation"));
        }
        let observations = observations
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                if o.num_states() != states.len() {
                    return Err(Error::validation(
                        i + 1,
                        None,
                        format!("has {} states, dataset declares {}", o.num_states(), states.len()),
                    ));
                }
                Observation::checked(o.prices, o.demand, i + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { states, observations })
    }

    /// Builds a dataset with generated labels `s1..sn` from integer-like
    /// rows; handy in tests and examples.
    pub fn from_rows(rows: &[(Vec<Rational>, Vec<Rational>)]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.0.len());
        let observations = rows
            .iter()
            .enumerate()
            .map(|(i, (p, x))| Observation::checked(p.clone(), x.clone(), i + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(default_labels(n), observations)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Corner state of every observation, or an error naming the first
    /// diversified one.
    pub fn corner_states(&self) -> Result<Vec<usize>> {
        self.observations
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.corner_state().ok_or_else(|| {
                    Error::Precondition(format!("observation {} is not a corner demand", i + 1))
                })
            })
            .collect()
    }

    /// Keeps the observations at `indices` (in that order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(
            self.states.clone(),
            indices.iter().map(|&i| self.observations[i].clone()).collect(),
        )
    }

    pub fn with_observation(&self, index: usize, obs: Observation) -> Result<Self> {
        let mut observations = self.observations.clone();
        observations[index] = obs;
        Self::new(self.states.clone(), observations)
    }

    pub fn permute_states(&self, order: &[usize]) -> Result<Self> {
        Self::new(
            order.iter().map(|&s| self.states[s].clone()).collect(),
            self.observations.iter().map(|o| o.permuted(order)).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DatasetFile::from(self)).expect("dataset serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self
            .states
            .iter()
            .map(|s| format!("{s}_price"))
            .chain(self.states.iter().map(|s| format!("{s}_demand")))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for o in &self.observations {
            let row: Vec<String> = o.prices.iter().chain(&o.demand).map(rational::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beliefs {
    probabilities: Vec<Rational>,
}

impl Beliefs {
    /// Full-support beliefs: every entry positive, exact sum one.
    pub fn new(probabilities: Vec<Rational>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Domain("beliefs need at least one state".into()));
        }
        if let Some(i) = probabilities.iter().position(|p| !p.is_positive()) {
            return Err(Error::Domain(format!("belief for state {} is not positive", i + 1)));
        }
        let total: Rational = probabilities.iter().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("beliefs sum to {total}, not 1")));
        }
        Ok(Self { probabilities })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(rational::parse_rational_list(text)?)
    }

    pub fn uniform(n: usize) -> Self {
        Self { probabilities: vec![rational::ratio(1, n as i64); n] }
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn get(&self, state: usize) -> &Rational {
        &self.probabilities[state]
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.probabilities.iter().map(rational::to_f64).collect()
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self { probabilities: order.iter().map(|&s| self.probabilities[s].clone()).collect() }
    }

    pub(crate) fn check_states(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::Precondition(format!(
                "beliefs cover {} states, dataset has {n}",
                self.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// `.csv` means CSV; anything else is read as JSON.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// A number field that may be written as a string (`"1/3"`, `"0.5"`) or a
/// bare JSON number.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Text(String),
    Number(serde_json::Number),
}

impl NumberText {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            NumberText::Text(s) => rational::parse_rational(s),
            NumberText::Number(n) => rational::parse_rational(&n.to_string()),
        }
    }
}

impl From<&Rational> for NumberText {
    fn from(q: &Rational) -> Self {
        NumberText::Text(rational::to_string(q))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObservationFile {
    pub prices: Vec<NumberText>,
    pub demand: Vec<NumberText>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetFile {
    pub states: Vec<String>,
    pub observations: Vec<ObservationFile>,
}

impl From<&Dataset> for DatasetFile {
    fn from(d: &Dataset) -> Self {
        Self {
            states: d.states.clone(),
            observations: d
                .observations
                .iter()
                .map(|o| ObservationFile {
                    prices: o.prices.iter().map(NumberText::from).collect(),
                    demand: o.demand.iter().map(NumberText::from).collect(),
                })
                .collect(),
        }
    }
}

impl DatasetFile {
    pub fn into_dataset(self) -> Result<Dataset> {
        let observations = self
            .observations
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let parse = |v: &[NumberText], what: &str| {
                    v.iter()
                        .enumerate()
                        .map(|(s, t)| {
                            t.to_rational().map_err(|e| {
                                Error::validation(i + 1, Some(s + 1), format!("bad {what}: {e}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                };
                let prices = parse(&o.prices, "price")?;
                let demand = parse(&o.demand, "demand")?;
                if prices.len() != self.states.len() || demand.len() != self.states.len() {
                    return Err(Error::validation(
                        i + 1,
                        None,
                        format!(
                            "ragged row: {} prices and {} demands for {} states",
                            prices.len(),
                            demand.len(),
                            self.states.len()
                        ),
                    ));
                }
                Observation::checked(prices, demand, i + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(self.states, observations)
    }
}

pub fn load_dataset(mut source: impl Read, format: Format) -> Result<Dataset> {
    match format {
        Format::Json => {
            let file: DatasetFile =
                serde_json::from_reader(source).map_err(|e| Error::Parse(format!("dataset JSON: {e}")))?;
            file.into_dataset()
        }
        Format::Csv => {
            let mut text = String::new();
            source.read_to_string(&mut text)?;
            parse_csv(&text)
        }
    }
}

pub fn load_dataset_path(path: &std::path::Path) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    load_dataset(std::io::BufReader::new(file), Format::from_path(path))
}

fn parse_csv(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse(format!("CSV header: {e}")))?.clone();
    if header.len() < 2 || header.len() % 2 != 0 {
        return Err(Error::Parse(format!(
            "CSV header needs n price columns then n demand columns, got {} columns",
            header.len()
        )));
    }
    let n = header.len() / 2;
    let mut states = Vec::with_capacity(n);
    for s in 0..n {
        let price_col = &header[s];
        let demand_col = &header[n + s];
        let label = price_col.strip_suffix("_price").ok_or_else(|| {
            Error::Parse(format!("column {} should end in _price: {price_col:?}", s + 1))
        })?;
        let demand_label = demand_col.strip_suffix("_demand").ok_or_else(|| {
            Error::Parse(format!("column {} should end in _demand: {demand_col:?}", n + s + 1))
        })?;
        if label != demand_label {
            return Err(Error::Parse(format!(
                "price column {price_col:?} and demand column {demand_col:?} name different states"
            )));
        }
        states.push(label.to_string());
    }

    let mut observations = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("CSV row {}: {e}", i + 1)))?;
        if record.len() != 2 * n {
            return Err(Error::validation(
                i + 1,
                None,
                format!("ragged row: {} fields, expected {}", record.len(), 2 * n),
            ));
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(c, field)| {
                rational::parse_rational(field)
                    .map_err(|e| Error::validation(i + 1, Some(c % n + 1), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let demand = values[n..].to_vec();
        let mut prices = values;
        prices.truncate(n);
        observations.push(Observation::checked(prices, demand, i + 1)?);
    }
    Dataset::new(states, observations)
}

/// One note per observation: its demand kind, with all-zero demands flagged.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationNote {
    pub observation: usize,
    pub wealth: String,
    #[serde(flatten)]
    pub kind: DemandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub fn validation_report(data: &Dataset) -> Vec<ValidationNote> {
    data.observations
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let kind = match o.kind() {
                DemandKind::Corner(s) => DemandKind::Corner(s + 1),
                k => k,
            };
            ValidationNote {
                observation: i + 1,
                wealth: rational::to_string(&o.wealth()),
                kind,
                warning: (kind == DemandKind::Zero)
                    .then(|| "all-zero demand is treated as diversified".to_string()),
            }
        })
        .collect()
}

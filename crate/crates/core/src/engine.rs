//! Index computation: main-variable means, the summed index, intensity,
//! classification, surface matrix, and descriptive statistics.
//!
//! Arithmetic runs on exact rationals end to end. Rounding to two decimals
//! happens only when a value is rendered: summing already-rounded components
//! drifts (a ten-term sum can be off by a cent), so every displayed figure is
//! the half-up rendering of the exact value.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::schema::IndicatorSchema;
use crate::scoring::Scorecard;

pub type Value = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IntensityLevel {
    Low,
    Acceptable,
    Good,
    Perfect,
}

impl fmt::Display for IntensityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntensityLevel::Low => "Low",
            IntensityLevel::Acceptable => "Acceptable",
            IntensityLevel::Good => "Good",
            IntensityLevel::Perfect => "Perfect",
        })
    }
}

impl FromStr for IntensityLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "Low" => Ok(IntensityLevel::Low),
            "Acceptable" => Ok(IntensityLevel::Acceptable),
            "Good" => Ok(IntensityLevel::Good),
            "Perfect" => Ok(IntensityLevel::Perfect),
            _ => Err(format!("unrecognized level {s:?}")),
        }
    }
}

/// Everything computed for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct PmcResult {
    pub doc_id: String,
    pub main_ids: Vec<String>,
    pub main_values: Vec<Value>,
    pub pmc: Value,
    pub g: Value,
    pub level: IntensityLevel,
    /// First nine main values arranged three by three; absent when the
    /// schema has fewer than nine main variables.
    pub surface: Option<[[Value; 3]; 3]>,
}

impl PmcResult {
    pub fn pmc_f64(&self) -> f64 {
        self.pmc.to_f64().unwrap()
    }

    pub fn g_f64(&self) -> f64 {
        self.g.to_f64().unwrap()
    }

    pub fn main_f64(&self, i: usize) -> f64 {
        self.main_values[i].to_f64().unwrap()
    }
}

/// One row of the statistics table.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub label: String,
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

/// Per-variable statistics plus the index and intensity rows.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsSummary {
    pub rows: Vec<StatsRow>,
}

/// Mean of the binary items under one main variable (exact).
pub fn main_variable_value(
    card: &Scorecard,
    schema: &IndicatorSchema,
    main_id: &str,
) -> Result<Value> {
    let main = schema
        .main(main_id)
        .ok_or_else(|| Error::UnknownMainVariable {
            id: main_id.to_string(),
        })?;
    let missing: Vec<String> = main
        .sub_variables
        .iter()
        .filter(|s| !card.values.contains_key(&s.id))
        .map(|s| s.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteScorecard {
            doc_id: card.doc_id.clone(),
            missing,
        });
    }
    let ones = main
        .sub_variables
        .iter()
        .filter(|s| card.values[&s.id])
        .count() as i64;
    Ok(Ratio::new(ones, main.item_count() as i64))
}

/// Sum of the main-variable values (exact).
pub fn pmc_index(card: &Scorecard, schema: &IndicatorSchema) -> Result<Value> {
    card.ensure_complete(schema)?;
    let mut total = Value::zero();
    for main in &schema.main_variables {
        total += main_variable_value(card, schema, &main.id)?;
    }
    Ok(total)
}

/// 10 minus the index value.
pub fn guarantee_intensity(pmc: f64) -> Result<f64> {
    if !(0.0..=10.0).contains(&pmc) {
        return Err(Error::OutOfRange {
            name: "pmc",
            value: pmc,
            min: 0.0,
            max: 10.0,
        });
    }
    Ok(10.0 - pmc)
}

fn guarantee_intensity_exact(pmc: Value) -> Result<Value> {
    if pmc < Value::zero() || pmc > Value::from_integer(10) {
        return Err(Error::OutOfRange {
            name: "pmc",
            value: pmc.to_f64().unwrap_or(f64::NAN),
            min: 0.0,
            max: 10.0,
        });
    }
    Ok(Value::from_integer(10) - pmc)
}

/// Bracket lookup over the intensity value. The top bracket is closed —
/// [5, 10] — so the attainable maximum classifies instead of falling through.
pub fn classify_intensity(g: f64) -> Result<IntensityLevel> {
    if !(0.0..=10.0).contains(&g) {
        return Err(Error::OutOfRange {
            name: "g",
            value: g,
            min: 0.0,
            max: 10.0,
        });
    }
    Ok(if g >= 5.0 {
        IntensityLevel::Perfect
    } else if g >= 3.0 {
        IntensityLevel::Good
    } else if g >= 1.0 {
        IntensityLevel::Acceptable
    } else {
        IntensityLevel::Low
    })
}

fn classify_intensity_exact(g: Value) -> Result<IntensityLevel> {
    if g < Value::zero() || g > Value::from_integer(10) {
        return Err(Error::OutOfRange {
            name: "g",
            value: g.to_f64().unwrap_or(f64::NAN),
            min: 0.0,
            max: 10.0,
        });
    }
    Ok(if g >= Value::from_integer(5) {
        IntensityLevel::Perfect
    } else if g >= Value::from_integer(3) {
        IntensityLevel::Good
    } else if g >= Value::from_integer(1) {
        IntensityLevel::Acceptable
    } else {
        IntensityLevel::Low
    })
}

/// First nine main values as a 3×3 matrix, row-major in schema order.
pub fn surface_matrix(main_values: &[Value]) -> Result<[[Value; 3]; 3]> {
    if main_values.len() < 9 {
        return Err(Error::InvalidParameter {
            name: "main_values",
            message: format!("surface needs at least 9 values, got {}", main_values.len()),
        });
    }
    let v = main_values;
    Ok([
        [v[0], v[1], v[2]],
        [v[3], v[4], v[5]],
        [v[6], v[7], v[8]],
    ])
}

pub fn evaluate(card: &Scorecard, schema: &IndicatorSchema) -> Result<PmcResult> {
    card.ensure_complete(schema)?;
    let mut main_ids = Vec::with_capacity(schema.main_variables.len());
    let mut main_values = Vec::with_capacity(schema.main_variables.len());
    for main in &schema.main_variables {
        main_ids.push(main.id.clone());
        main_values.push(main_variable_value(card, schema, &main.id)?);
    }
    let pmc: Value = main_values.iter().sum();
    let g = guarantee_intensity_exact(pmc)?;
    let level = classify_intensity_exact(g)?;
    let surface = if main_values.len() >= 9 {
        if main_values.len() != 10 {
            log::warn!(
                "schema has {} main variables; surface uses the first 9",
                main_values.len()
            );
        }
        Some(surface_matrix(&main_values)?)
    } else {
        None
    };
    Ok(PmcResult {
        doc_id: card.doc_id.clone(),
        main_ids,
        main_values,
        pmc,
        g,
        level,
        surface,
    })
}

/// Evaluate every scorecard; result order equals input order.
pub fn evaluate_all(cards: &[Scorecard], schema: &IndicatorSchema) -> Result<Vec<PmcResult>> {
    cards
        .par_iter()
        .map(|card| evaluate(card, schema))
        .collect()
}

/// Per-variable statistics (sample standard deviation, n − 1 divisor) plus
/// PMC and G rows. All results must share one schema shape.
pub fn descriptive_stats(results: &[PmcResult]) -> Result<StatsSummary> {
    if results.is_empty() {
        return Err(Error::EmptyInput {
            what: "result list",
        });
    }
    let ids = &results[0].main_ids;
    for r in results {
        if &r.main_ids != ids {
            return Err(Error::InvalidParameter {
                name: "results",
                message: format!(
                    "document {:?} was scored under a different schema",
                    r.doc_id
                ),
            });
        }
    }
    let mut rows = Vec::with_capacity(ids.len() + 2);
    for (i, id) in ids.iter().enumerate() {
        let values: Vec<f64> = results.iter().map(|r| r.main_f64(i)).collect();
        rows.push(stats_row(id, &values));
    }
    let pmc: Vec<f64> = results.iter().map(|r| r.pmc_f64()).collect();
    rows.push(stats_row("PMC", &pmc));
    let g: Vec<f64> = results.iter().map(|r| r.g_f64()).collect();
    rows.push(stats_row("G", &g));
    Ok(StatsSummary { rows })
}

fn stats_row(label: &str, values: &[f64]) -> StatsRow {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = if n < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    StatsRow {
        label: label.to_string(),
        count: n,
        mean,
        sd,
        min,
        max,
    }
}

/// Half-up rendering of an exact value to two decimals, e.g. 293/60 → "4.88".
pub fn fmt2(x: Value) -> String {
    debug_assert!(x >= Value::zero());
    let (p, q) = (*x.numer(), *x.denom());
    let scaled = (200 * p + q) / (2 * q); // floor(100·x + 1/2)
    format!("{}.{:02}", scaled / 100, scaled % 100)
}

/// Half-up two-decimal rendering for already-float summary values.
pub fn fmt2_f64(x: f64) -> String {
    let scaled = (x * 100.0).round();
    format!("{:.2}", scaled / 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{builtin_schema, parse_schema};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    /// Scorecard setting the first `ones[i]` items of each main variable.
    fn card_from_counts(doc_id: &str, schema: &IndicatorSchema, ones: &[usize]) -> Scorecard {
        assert_eq!(ones.len(), schema.main_variables.len());
        let mut values = BTreeMap::new();
        let mut provenance = BTreeMap::new();
        for (main, &count) in schema.main_variables.iter().zip(ones) {
            assert!(count <= main.item_count());
            for (j, sub) in main.sub_variables.iter().enumerate() {
                values.insert(sub.id.clone(), j < count);
                provenance.insert(sub.id.clone(), crate::scoring::Source::Manual);
            }
        }
        Scorecard {
            doc_id: doc_id.into(),
            values,
            provenance,
        }
    }

    #[test]
    fn main_value_is_exact_mean() {
        let schema = builtin_schema();
        let card = card_from_counts("1", &schema, &[0, 2, 0, 3, 0, 0, 0, 0, 0, 0]);
        assert_eq!(
            main_variable_value(&card, &schema, "P2").unwrap(),
            Ratio::new(2, 3)
        );
        assert_eq!(fmt2(main_variable_value(&card, &schema, "P2").unwrap()), "0.67");
        assert_eq!(
            main_variable_value(&card, &schema, "P4").unwrap(),
            Ratio::new(3, 4)
        );
        assert_eq!(
            main_variable_value(&card, &schema, "P1").unwrap(),
            Value::zero()
        );
    }

    #[test]
    fn unknown_main_id_errors() {
        let schema = builtin_schema();
        let card = card_from_counts("1", &schema, &[0; 10]);
        assert!(matches!(
            main_variable_value(&card, &schema, "P99"),
            Err(Error::UnknownMainVariable { id }) if id == "P99"
        ));
    }

    #[test]
    fn full_precision_then_round_not_component_rounding() {
        // Counts whose rounded components sum a cent high: the exact index
        // is 293/60 = 4.8833…, which must display 4.88.
        let schema = builtin_schema();
        let card = card_from_counts("2011", &schema, &[1, 2, 1, 3, 1, 2, 2, 2, 3, 1]);
        let pmc = pmc_index(&card, &schema).unwrap();
        assert_eq!(pmc, Ratio::new(293, 60));
        assert_eq!(fmt2(pmc), "4.88");

        // Summing the per-variable 2-decimal renderings gives 4.89 instead.
        let rounded_sum: f64 = schema
            .main_variables
            .iter()
            .map(|m| {
                fmt2(main_variable_value(&card, &schema, &m.id).unwrap())
                    .parse::<f64>()
                    .unwrap()
            })
            .sum();
        assert_eq!(fmt2_f64(rounded_sum), "4.89");
    }

    #[test]
    fn all_ones_scores_ten() {
        let schema = builtin_schema();
        let counts: Vec<usize> = schema
            .main_variables
            .iter()
            .map(|m| m.item_count())
            .collect();
        let card = card_from_counts("max", &schema, &counts);
        let result = evaluate(&card, &schema).unwrap();
        assert_eq!(result.pmc, Value::from_integer(10));
        assert_eq!(result.g, Value::zero());
        assert_eq!(result.level, IntensityLevel::Low);
        assert_eq!(fmt2(result.pmc), "10.00");
    }

    #[test]
    fn earliest_fixture_column() {
        let schema = builtin_schema();
        let card = card_from_counts("2008", &schema, &[2, 3, 1, 3, 1, 3, 2, 1, 3, 1]);
        let result = evaluate(&card, &schema).unwrap();
        assert_eq!(result.pmc, Ratio::new(16, 3));
        assert_eq!(fmt2(result.pmc), "5.33");
        assert_eq!(fmt2(result.g), "4.67");
        assert_eq!(result.level, IntensityLevel::Good);
    }

    #[test]
    fn intensity_from_float_index() {
        assert!((guarantee_intensity(7.77).unwrap() - 2.23).abs() < 1e-12);
        assert_eq!(guarantee_intensity(10.0).unwrap(), 0.0);
        assert!((guarantee_intensity(4.80).unwrap() - 5.20).abs() < 1e-12);
        assert!(guarantee_intensity(-0.1).is_err());
        assert!(guarantee_intensity(10.1).is_err());
    }

    #[test]
    fn classification_brackets() {
        assert_eq!(classify_intensity(0.0).unwrap(), IntensityLevel::Low);
        assert_eq!(classify_intensity(0.99).unwrap(), IntensityLevel::Low);
        assert_eq!(classify_intensity(1.0).unwrap(), IntensityLevel::Acceptable);
        assert_eq!(classify_intensity(2.23).unwrap(), IntensityLevel::Acceptable);
        assert_eq!(classify_intensity(3.0).unwrap(), IntensityLevel::Good);
        assert_eq!(classify_intensity(4.67).unwrap(), IntensityLevel::Good);
        assert_eq!(classify_intensity(5.0).unwrap(), IntensityLevel::Perfect);
        assert_eq!(classify_intensity(5.12).unwrap(), IntensityLevel::Perfect);
        assert_eq!(classify_intensity(10.0).unwrap(), IntensityLevel::Perfect);
        assert!(classify_intensity(-0.01).is_err());
        assert!(classify_intensity(10.01).is_err());
    }

    #[test]
    fn surface_is_row_major_first_nine() {
        let schema = builtin_schema();
        let card = card_from_counts("2016", &schema, &[4, 3, 3, 3, 3, 4, 4, 3, 4, 1]);
        let result = evaluate(&card, &schema).unwrap();
        let surface = result.surface.unwrap();
        let rendered: Vec<Vec<String>> = surface
            .iter()
            .map(|row| row.iter().map(|v| fmt2(*v)).collect())
            .collect();
        assert_eq!(
            rendered,
            vec![
                vec!["0.67", "1.00", "0.60"],
                vec!["0.75", "0.60", "0.80"],
                vec!["0.80", "0.75", "0.80"],
            ]
        );
    }

    #[test]
    fn surface_all_ones() {
        let one = Value::from_integer(1);
        let m = surface_matrix(&[one; 10]).unwrap();
        assert!(m.iter().flatten().all(|v| *v == one));
    }

    #[test]
    fn surface_requires_nine_values() {
        assert!(surface_matrix(&[Value::zero(); 8]).is_err());
        assert!(surface_matrix(&[Value::zero(); 9]).is_ok());
    }

    #[test]
    fn small_schema_skips_surface() {
        let schema = parse_schema(
            r#"
            [[main]]
            id = "M"
            name = "only"
            [[main.sub]]
            id = "M1"
            name = "x"
        "#,
        )
        .unwrap();
        let card = card_from_counts("1", &schema, &[1]);
        let result = evaluate(&card, &schema).unwrap();
        assert!(result.surface.is_none());
        assert_eq!(result.pmc, Value::from_integer(1));
    }

    #[test]
    fn incomplete_card_lists_missing() {
        let schema = builtin_schema();
        let mut card = card_from_counts("1", &schema, &[0; 10]);
        card.values.remove("P11");
        card.values.remove("P23");
        match pmc_index(&card, &schema) {
            Err(Error::IncompleteScorecard { missing, .. }) => {
                assert_eq!(missing, vec!["P11".to_string(), "P23".to_string()]);
            }
            other => panic!("expected incomplete error, got {other:?}"),
        }
    }

    /// Random schema: 2–12 main variables of 1–8 items each, some direct.
    fn random_schema(rng: &mut ChaCha8Rng) -> IndicatorSchema {
        let n_main = rng.gen_range(2..=12);
        let mains: Vec<crate::schema::MainVariable> = (0..n_main)
            .map(|i| {
                let direct = rng.gen_bool(0.15);
                let id = format!("V{i}");
                let subs = if direct {
                    vec![crate::schema::SubVariable {
                        id: id.clone(),
                        name: format!("direct {i}"),
                        keywords: vec![],
                        patterns: vec![],
                    }]
                } else {
                    (0..rng.gen_range(1..=8))
                        .map(|j| crate::schema::SubVariable {
                            id: format!("V{i}_{j}"),
                            name: format!("item {j}"),
                            keywords: vec![],
                            patterns: vec![],
                        })
                        .collect()
                };
                crate::schema::MainVariable {
                    id,
                    name: format!("main {i}"),
                    direct,
                    sub_variables: subs,
                }
            })
            .collect();
        let schema = IndicatorSchema {
            main_variables: mains,
        };
        schema.validate().unwrap();
        schema
    }

    fn random_card(rng: &mut ChaCha8Rng, schema: &IndicatorSchema) -> Scorecard {
        let mut values = BTreeMap::new();
        let mut provenance = BTreeMap::new();
        for main in &schema.main_variables {
            for sub in &main.sub_variables {
                values.insert(sub.id.clone(), rng.gen_bool(0.5));
                provenance.insert(sub.id.clone(), crate::scoring::Source::Manual);
            }
        }
        Scorecard {
            doc_id: "r".into(),
            values,
            provenance,
        }
    }

    #[test]
    fn identity_and_flip_properties_on_random_schemas() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let schema = random_schema(&mut rng);
            let card = random_card(&mut rng, &schema);
            let result = evaluate(&card, &schema).unwrap();

            // Identity: PMC + G is the exact constant.
            assert_eq!(
                result.pmc + result.g,
                Value::from_integer(10) * Value::from_integer(1)
            );
            assert!(
                (result.pmc_f64() + result.g_f64() - 10.0).abs() < 1e-12
            );

            // Flip one random item: the index moves by exactly ±1/n_i.
            let main_idx = rng.gen_range(0..schema.main_variables.len());
            let main = &schema.main_variables[main_idx];
            let sub = &main.sub_variables[rng.gen_range(0..main.item_count())];
            let mut flipped = card.clone();
            let old = flipped.values[&sub.id];
            flipped.values.insert(sub.id.clone(), !old);
            let after = evaluate(&flipped, &schema).unwrap();
            let delta = after.pmc - result.pmc;
            let unit = Ratio::new(1, main.item_count() as i64);
            assert_eq!(delta, if old { -unit } else { unit });
            assert_eq!(result.g - after.g, delta);
        }
    }

    proptest! {
        #[test]
        fn bounds_hold_for_random_cards(seed in 0u64..5000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let schema = random_schema(&mut rng);
            let card = random_card(&mut rng, &schema);
            let result = evaluate(&card, &schema).unwrap();
            let n = schema.main_variables.len() as i64;
            prop_assert!(result.pmc >= Value::zero());
            prop_assert!(result.pmc <= Value::from_integer(n));
            for v in &result.main_values {
                prop_assert!(*v >= Value::zero() && *v <= Value::from_integer(1));
            }
        }
    }

    #[test]
    fn stats_hand_arithmetic() {
        let schema = parse_schema(
            r#"
            [[main]]
            id = "A"
            name = "a"
            direct = true
        "#,
        )
        .unwrap();
        // Two documents with direct values 0 and 1 → PMC 0 and 1.
        let zero = card_from_counts("z", &schema, &[0]);
        let one = card_from_counts("o", &schema, &[1]);
        let results = evaluate_all(&[zero, one], &schema).unwrap();
        let stats = descriptive_stats(&results).unwrap();
        let pmc_row = stats.rows.iter().find(|r| r.label == "PMC").unwrap();
        assert_eq!(pmc_row.count, 2);
        assert!((pmc_row.mean - 0.5).abs() < 1e-12);
        // Sample sd of {0, 1}: sqrt(((0.5)² + (0.5)²) / 1) = 1/√2.
        assert!((pmc_row.sd - (0.5f64).sqrt()).abs() < 1e-12);
        assert_eq!(pmc_row.min, 0.0);
        assert_eq!(pmc_row.max, 1.0);
    }

    #[test]
    fn stats_pair_example() {
        // {4, 6}: mean 5, sample sd √2.
        let row = stats_row("x", &[4.0, 6.0]);
        assert_eq!(row.mean, 5.0);
        assert!((row.sd - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn stats_single_result_and_constant_column() {
        let schema = builtin_schema();
        let card = card_from_counts("1", &schema, &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let results = evaluate_all(&[card], &schema).unwrap();
        let stats = descriptive_stats(&results).unwrap();
        let p10 = stats.rows.iter().find(|r| r.label == "P10").unwrap();
        assert_eq!(p10.count, 1);
        assert_eq!(p10.mean, 1.0);
        assert_eq!(p10.sd, 0.0);
        for row in &stats.rows {
            assert!(row.min <= row.mean + 1e-12 && row.mean <= row.max + 1e-12);
        }
    }

    #[test]
    fn stats_reject_empty_and_mixed_schemas() {
        assert!(matches!(
            descriptive_stats(&[]),
            Err(Error::EmptyInput { .. })
        ));
        let schema = builtin_schema();
        let card = card_from_counts("1", &schema, &[0; 10]);
        let mut a = evaluate(&card, &schema).unwrap();
        let b = a.clone();
        a.main_ids[0] = "other".into();
        assert!(descriptive_stats(&[a, b]).is_err());
    }

    #[test]
    fn display_rounding_is_half_up() {
        assert_eq!(fmt2(Ratio::new(1, 8)), "0.13"); // 0.125 rounds up
        assert_eq!(fmt2(Ratio::new(3, 8)), "0.38"); // 0.375 rounds up
        assert_eq!(fmt2(Ratio::new(1, 2)), "0.50");
        assert_eq!(fmt2(Ratio::new(2, 3)), "0.67");
        assert_eq!(fmt2(Ratio::new(1, 6)), "0.17");
        assert_eq!(fmt2(Ratio::new(1, 3)), "0.33");
        assert_eq!(fmt2(Value::zero()), "0.00");
        assert_eq!(fmt2(Value::from_integer(10)), "10.00");
        assert_eq!(fmt2(Ratio::new(293, 60)), "4.88");
        assert_eq!(fmt2(Ratio::new(307, 60)), "5.12");
        assert_eq!(fmt2_f64(0.125), "0.13");
        assert_eq!(fmt2_f64(6.385), "6.39");
    }

    #[test]
    fn evaluate_all_preserves_order() {
        let schema = builtin_schema();
        let cards: Vec<Scorecard> = (0..12)
            .map(|i| card_from_counts(&format!("doc{i}"), &schema, &[i % 6, 0, 0, 0, 0, 0, 0, 0, 0, 0]))
            .collect();
        let results = evaluate_all(&cards, &schema).unwrap();
        let ids: Vec<&str> = results.iter().map(|r| r.doc_id.as_str()).collect();
        let want: Vec<String> = (0..12).map(|i| format!("doc{i}")).collect();
        assert_eq!(ids, want.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    }
}

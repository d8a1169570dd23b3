use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{GameError, Policy, Profile};

/// How a realized loss is drawn given the pair of sampled actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossMode {
    /// `loss ~ Bernoulli(L(a, b))`, values in `{0, 1}`.
    Bernoulli,
    /// `loss = L(a, b)`; useful for debugging.
    Deterministic,
}

impl fmt::Display for LossMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossMode::Bernoulli => "bernoulli",
            LossMode::Deterministic => "deterministic",
        })
    }
}

impl FromStr for LossMode {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bernoulli" => Ok(LossMode::Bernoulli),
            "deterministic" => Ok(LossMode::Deterministic),
            other => Err(GameError::Parse(format!("unknown loss mode `{other}`"))),
        }
    }
}

/// Mean-loss matrix of a zero-sum game. The min-player picks rows and pays
/// `L(a, b)`; the max-player picks columns and receives it.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGame {
    rows: usize,
    cols: usize,
    mean: Vec<f64>,
    mode: LossMode,
}

impl MatrixGame {
    pub fn new(rows: Vec<Vec<f64>>, mode: LossMode) -> Result<Self, GameError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(GameError::InvalidGame("rows have different lengths".into()));
        }
        Self::from_flat(n_rows, n_cols, rows.into_iter().flatten().collect(), mode)
    }

    /// Builds a game from row-major entries.
    pub fn from_flat(rows: usize, cols: usize, mean: Vec<f64>, mode: LossMode) -> Result<Self, GameError> {
        if rows == 0 || cols == 0 {
            return Err(GameError::InvalidGame("a game needs at least one action per player".into()));
        }
        if mean.len() != rows * cols {
            return Err(GameError::DimensionMismatch { expected: rows * cols, got: mean.len() });
        }
        if let Some(v) = mean.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(GameError::InvalidGame(format!("entry {v} outside [0, 1]")));
        }
        Ok(Self { rows, cols, mean, mode })
    }

    /// Number of min-player actions (A).
    pub fn num_min_actions(&self) -> usize {
        self.rows
    }

    /// Number of max-player actions (B).
    pub fn num_max_actions(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn loss_mode(&self) -> LossMode {
        self.mode
    }

    pub fn with_loss_mode(mut self, mode: LossMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.mean[a * self.cols + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.mean[a * self.cols..(a + 1) * self.cols]
    }

    /// `L nu`: expected loss of each min-player action against `nu`.
    pub fn loss_vector(&self, nu: &Policy) -> Result<Vec<f64>, GameError> {
        self.check_max(nu)?;
        Ok((0..self.rows).map(|a| crate::numerics::dot(self.row(a), nu.probs())).collect())
    }

    /// `mu^T L`: expected loss of each max-player action against `mu`.
    pub fn payoff_vector(&self, mu: &Policy) -> Result<Vec<f64>, GameError> {
        self.check_min(mu)?;
        let mut out = vec![0.0; self.cols];
        for (a, &m) in mu.probs().iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (o, &l) in out.iter_mut().zip(self.row(a)) {
                *o += m * l;
            }
        }
        Ok(out)
    }

    /// The unregularized operator `F(w) = (L nu, 1 - mu^T L)`.
    pub fn pseudo_gradient(&self, w: &Profile) -> Result<Vec<f64>, GameError> {
        let mut out = self.loss_vector(&w.max_policy)?;
        out.extend(self.payoff_vector(&w.min_policy)?.into_iter().map(|v| 1.0 - v));
        Ok(out)
    }

    /// Draws a realized loss for the pair `(a, b)`.
    pub fn sample_loss<R: Rng + ?Sized>(&self, a: usize, b: usize, rng: &mut R) -> f64 {
        let mean = self.entry(a, b);
        match self.mode {
            LossMode::Bernoulli => {
                if rng.gen::<f64>() < mean {
                    1.0
                } else {
                    0.0
                }
            }
            LossMode::Deterministic => mean,
        }
    }

    fn check_min(&self, mu: &Policy) -> Result<(), GameError> {
        if mu.len() != self.rows {
            return Err(GameError::DimensionMismatch { expected: self.rows, got: mu.len() });
        }
        Ok(())
    }

    fn check_max(&self, nu: &Policy) -> Result<(), GameError> {
        if nu.len() != self.cols {
            return Err(GameError::DimensionMismatch { expected: self.cols, got: nu.len() });
        }
        Ok(())
    }

    /// Serializes to the plain-text game format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.mode);
        for a in 0..self.rows {
            let row: Vec<String> = self.row(a).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// `mu^T L nu`.
pub fn expected_loss(game: &MatrixGame, profile: &Profile) -> Result<f64, GameError> {
    let lv = game.loss_vector(&profile.max_policy)?;
    game.check_min(&profile.min_policy)?;
    Ok(crate::numerics::dot(profile.min_policy.probs(), &lv))
}

/// Exploitability gap `max_b (mu^T L)(b) - min_a (L nu)(a)`.
///
/// Best responses over a simplex are attained at vertices, so enumerating pure
/// actions is exact.
pub fn exploitability_gap(game: &MatrixGame, profile: &Profile) -> Result<f64, GameError> {
    let lv = game.loss_vector(&profile.max_policy)?;
    let ml = game.payoff_vector(&profile.min_policy)?;
    let best_min = lv.iter().copied().fold(f64::INFINITY, f64::min);
    let best_max = ml.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((best_max - best_min).max(0.0))
}

impl FromStr for MatrixGame {
    type Err = GameError;

    /// Parses `"A B loss_mode"` followed by `A` rows of `B` reals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| GameError::Parse("empty game file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GameError::Parse(format!("header `{header}` must be `A B loss_mode`")));
        }
        let parse_dim = |t: &str| t.parse::<usize>().map_err(|_| GameError::Parse(format!("bad dimension `{t}`")));
        let rows = parse_dim(fields[0])?;
        let cols = parse_dim(fields[1])?;
        let mode: LossMode = fields[2].parse()?;
        let mut mean = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            let line = lines.next().ok_or_else(|| GameError::Parse(format!("missing row {}", a + 1)))?;
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| GameError::Parse(format!("bad entry `{t}`"))))
                .collect::<Result<_, _>>()?;
            if row.len() != cols {
                return Err(GameError::Parse(format!("row {} has {} entries, expected {cols}", a + 1, row.len())));
            }
            mean.extend(row);
        }
        if let Some(extra) = lines.next() {
            return Err(GameError::Parse(format!("trailing content `{extra}`")));
        }
        Self::from_flat(rows, cols, mean, mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::hard_instance;

    fn uniform2() -> Profile {
        Profile::uniform(2, 2)
    }

    #[test]
    fn expected_loss_examples() {
        let m0 = hard_instance(0.0).unwrap();
        assert!((expected_loss(&m0, &uniform2()).unwrap() - 0.5).abs() < 1e-15);

        let single = MatrixGame::new(vec![vec![0.7]], LossMode::Bernoulli).unwrap();
        let pm = Profile::new(Policy::point_mass(1, 0), Policy::point_mass(1, 0));
        assert_eq!(expected_loss(&single, &pm).unwrap(), 0.7);

        let m = hard_instance(1.0 / 12.0).unwrap();
        let corner = Profile::new(Policy::point_mass(2, 0), Policy::point_mass(2, 0));
        assert!((expected_loss(&m, &corner).unwrap() - (2.0 / 3.0 - 1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn exploitability_examples() {
        let m0 = hard_instance(0.0).unwrap();
        assert!(exploitability_gap(&m0, &uniform2()).unwrap().abs() < 1e-15);
        let w = Profile::new(Policy::uniform(2), Policy::point_mass(2, 0));
        assert!((exploitability_gap(&m0, &w).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let m0 = hard_instance(0.0).unwrap();
        let w = Profile::uniform(3, 2);
        assert!(matches!(expected_loss(&m0, &w), Err(GameError::DimensionMismatch { .. })));
        assert!(exploitability_gap(&m0, &Profile::uniform(2, 3)).is_err());
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(MatrixGame::new(vec![vec![1.2]], LossMode::Bernoulli).is_err());
        assert!(MatrixGame::new(vec![vec![0.1, 0.2], vec![0.3]], LossMode::Bernoulli).is_err());
        assert!(MatrixGame::new(vec![], LossMode::Bernoulli).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "2 3 deterministic\n0.1 0.2 0.3\n1 0 0.5\n";
        let g: MatrixGame = text.parse().unwrap();
        assert_eq!(g.dims(), (2, 3));
        assert_eq!(g.entry(1, 2), 0.5);
        assert_eq!(g.loss_mode(), LossMode::Deterministic);
        assert_eq!(g.to_text(), text);
        assert!("2 2 bernoulli\n0.1 0.2\n".parse::<MatrixGame>().is_err());
        assert!("2 2 poisson\n0 0\n0 0\n".parse::<MatrixGame>().is_err());
    }

    #[test]
    fn deterministic_mode_returns_mean() {
        let g = hard_instance(0.0).unwrap().with_loss_mode(LossMode::Deterministic);
        let mut rng = rand::thread_rng();
        assert_eq!(g.sample_loss(0, 1, &mut rng), 1.0 / 3.0);
    }
}

use serde::{Deserialize, Serialize};

/// Integer grid cell. Origin top-left, x rightward, y downward.
/// Serialized as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn center(self) -> Point {
        Point::new(self.x as f64 + 0.5, self.y as f64 + 0.5)
    }
}

impl From<(i32, i32)> for Cell {
    fn from((x, y): (i32, i32)) -> Self {
        Self { x, y }
    }
}

impl From<Cell> for (i32, i32) {
    fn from(c: Cell) -> Self {
        (c.x, c.y)
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Continuous position in cell units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn cell(self) -> Cell {
        Cell::new(self.x.floor() as i32, self.y.floor() as i32)
    }

    pub fn distance(self, other: Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    pub fn offset(self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }

    /// Unit vector from `self` toward `target`, or `None` when they coincide.
    pub fn direction_to(self, target: Point) -> Option<(f64, f64)> {
        let dx = target.x - self.x;
        let dy = target.y - self.y;
        let len = dx.hypot(dy);
        (len > 0.0).then(|| (dx / len, dy / len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_of_point_floors() {
        assert_eq!(Point::new(3.99, 0.0).cell(), Cell::new(3, 0));
        assert_eq!(Point::new(-0.01, 2.5).cell(), Cell::new(-1, 2));
        assert_eq!(Cell::new(2, 7).center().cell(), Cell::new(2, 7));
    }

    #[test]
    fn cell_serializes_as_pair() {
        let json = serde_json::to_string(&Cell::new(4, 9)).unwrap();
        assert_eq!(json, "[4,9]");
        let back: Cell = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Cell::new(4, 9));
    }

    #[test]
    fn direction_is_unit_or_absent() {
        let p = Point::new(1.0, 1.0);
        assert_eq!(p.direction_to(Point::new(4.0, 1.0)), Some((1.0, 0.0)));
        let (x, y) = p.direction_to(Point::new(2.0, 2.0)).unwrap();
        assert!(((x * x + y * y) - 1.0).abs() < 1e-12);
        assert_eq!(p.direction_to(p), None);
    }
}

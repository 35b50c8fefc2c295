//! Finite maps from metric spaces into Euclidean space.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Coordinates for every point of every component. Vectors may have
/// different lengths; missing coordinates are zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EmbeddingTable {
    components: Vec<Vec<Vec<f64>>>,
}

impl EmbeddingTable {
    pub fn new(components: Vec<Vec<Vec<f64>>>) -> Self {
        EmbeddingTable { components }
    }

    pub fn single(points: Vec<Vec<f64>>) -> Self {
        EmbeddingTable { components: vec![points] }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Vec<f64>>] {
        &self.components
    }

    pub fn points(&self, component: usize) -> &[Vec<f64>] {
        &self.components[component]
    }

    pub fn point(&self, component: usize, x: usize) -> &[f64] {
        &self.components[component][x]
    }

    pub fn into_components(self) -> Vec<Vec<Vec<f64>>> {
        self.components
    }

    /// Largest vector length.
    pub fn dimension(&self) -> usize {
        self.components.iter().flatten().map(Vec::len).max().unwrap_or(0)
    }

    /// `‖F(x) − F(y)‖` within one component.
    pub fn distance(&self, component: usize, x: usize, y: usize) -> f64 {
        euclidean(self.point(component, x), self.point(component, y))
    }

    /// CSV with header `component,point,coord_0,...`, padded with zeros to
    /// the common dimension.
    pub fn to_csv(&self) -> String {
        let dim = self.dimension();
        let mut out = String::from("component,point");
        for i in 0..dim {
            let _ = write!(out, ",coord_{i}");
        }
        out.push('\n');
        for (c, pts) in self.components.iter().enumerate() {
            for (p, v) in pts.iter().enumerate() {
                let _ = write!(out, "{c},{p}");
                for i in 0..dim {
                    let _ = write!(out, ",{}", v.get(i).copied().unwrap_or(0.0));
                }
                out.push('\n');
            }
        }
        out
    }
}

pub fn squared_distance(u: &[f64], v: &[f64]) -> f64 {
    let n = u.len().max(v.len());
    (0..n)
        .map(|i| {
            let d = u.get(i).copied().unwrap_or(0.0) - v.get(i).copied().unwrap_or(0.0);
            d * d
        })
        .sum()
}

pub fn euclidean(u: &[f64], v: &[f64]) -> f64 {
    squared_distance(u, v).sqrt()
}

pub fn norm(u: &[f64]) -> f64 {
    u.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn inner(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

//! Binary model container.
//!
//! Layout (little-endian): `SDML`, format version u16, kind u8, schema hash
//! u64, seed u64, threshold f64, training timestamp i64, then sections of
//! `[id u8][length u64][payload]`.

use std::path::Path;

use ndarray::{Array1, Array2};

use crate::convnet::{Architecture, ConvNetModel, Dense};
use crate::error::{Error, Result};
use crate::features::{StandardizerState, FEATURE_COUNT};
use crate::forest::{ForestModel, TreeNode};

pub const MAGIC: &[u8; 4] = b"SDML";
pub const FORMAT_VERSION: u16 = 1;

const SECTION_FOREST_PARAMS: u8 = 1;
const SECTION_FOREST_TREES: u8 = 2;
const SECTION_CONVNET_ARCH: u8 = 16;
const SECTION_CONVNET_TENSORS: u8 = 17;
const SECTION_STANDARDIZER: u8 = 32;

const NODE_LEAF: u8 = 0;
const NODE_SPLIT: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Forest = 1,
    ConvNet = 2,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Forest => "forest",
            ModelKind::ConvNet => "convnet",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Forest(ForestModel),
    ConvNet(ConvNetModel),
}

impl Classifier {
    pub fn kind(&self) -> ModelKind {
        match self {
            Classifier::Forest(_) => ModelKind::Forest,
            Classifier::ConvNet(_) => ModelKind::ConvNet,
        }
    }

    pub fn schema_hash(&self) -> u64 {
        match self {
            Classifier::Forest(m) => m.schema_hash,
            Classifier::ConvNet(m) => m.schema_hash,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Classifier::Forest(m) => m.seed,
            Classifier::ConvNet(m) => m.seed,
        }
    }

    pub fn threshold(&self) -> f64 {
        match self {
            Classifier::Forest(m) => m.threshold,
            Classifier::ConvNet(m) => m.threshold,
        }
    }
}

/// A trained classifier together with the scaler it was trained behind.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub classifier: Classifier,
    pub standardizer: Option<StandardizerState>,
    /// Seconds since the Unix epoch; 0 when not recorded.
    pub trained_at: i64,
}

impl ModelFile {
    pub fn new(classifier: Classifier, standardizer: Option<StandardizerState>) -> Self {
        ModelFile {
            classifier,
            standardizer,
            trained_at: 0,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.classifier.kind()
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn usize(&mut self, v: usize) {
        self.u64(v as u64);
    }
    fn section(&mut self, id: u8, payload: Writer) {
        self.u8(id);
        self.usize(payload.0.len());
        self.0.extend_from_slice(&payload.0);
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes, pos: 0 }
    }
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::Integrity(format!(
                "unexpected end of data at byte {} (wanted {n} more)",
                self.pos
            )));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| Error::Integrity(format!("implausible size {v}")))
    }
    /// An item count, bounded by the bytes left so corrupt values cannot
    /// trigger huge allocations.
    fn count(&mut self) -> Result<usize> {
        let v = self.usize()?;
        if v > self.bytes.len() - self.pos {
            return Err(Error::Integrity(format!("implausible item count {v}")));
        }
        Ok(v)
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(
            n.checked_mul(8)
                .ok_or_else(|| Error::Integrity("size overflow".into()))?,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
    fn finish(&self, what: &str) -> Result<()> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(Error::Integrity(format!(
                "{} trailing bytes in {what}",
                self.bytes.len() - self.pos
            )))
        }
    }
}

fn write_tree(w: &mut Writer, node: &TreeNode) {
    match node {
        TreeNode::Leaf { counts } => {
            w.u8(NODE_LEAF);
            w.u64(counts[0]);
            w.u64(counts[1]);
        }
        TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        } => {
            w.u8(NODE_SPLIT);
            w.usize(*feature);
            w.f64(*threshold);
            write_tree(w, left);
            write_tree(w, right);
        }
    }
}

const MAX_TREE_DEPTH: usize = 10_000;

fn read_tree(r: &mut Reader, n_features: usize, depth: usize) -> Result<TreeNode> {
    if depth > MAX_TREE_DEPTH {
        return Err(Error::Integrity("tree nesting too deep".into()));
    }
    match r.u8()? {
        NODE_LEAF => Ok(TreeNode::Leaf {
            counts: [r.u64()?, r.u64()?],
        }),
        NODE_SPLIT => {
            let feature = r.usize()?;
            if feature >= n_features {
                return Err(Error::Integrity(format!(
                    "split on feature {feature} of {n_features}"
                )));
            }
            let threshold = r.f64()?;
            let left = read_tree(r, n_features, depth + 1)?;
            let right = read_tree(r, n_features, depth + 1)?;
            Ok(TreeNode::split(feature, threshold, left, right))
        }
        tag => Err(Error::Integrity(format!("unknown tree node tag {tag}"))),
    }
}

fn write_tensor(w: &mut Writer, dims: &[usize], data: &[f64]) {
    w.u8(dims.len() as u8);
    for &d in dims {
        w.usize(d);
    }
    for &v in data {
        w.f64(v);
    }
}

fn read_tensor(r: &mut Reader, expected: &[usize]) -> Result<Vec<f64>> {
    let ndim = r.u8()? as usize;
    let dims = (0..ndim).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
    if dims != expected {
        return Err(Error::Integrity(format!(
            "tensor dimensions {dims:?}, expected {expected:?}"
        )));
    }
    r.f64s(dims.iter().product())
}

/// Serialize a model to container bytes.
pub fn model_to_bytes(model: &ModelFile) -> Vec<u8> {
    let c = &model.classifier;
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.0.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    w.u8(c.kind() as u8);
    w.u64(c.schema_hash());
    w.u64(c.seed());
    w.f64(c.threshold());
    w.0.extend_from_slice(&model.trained_at.to_le_bytes());

    match c {
        Classifier::Forest(f) => {
            let mut p = Writer(Vec::new());
            p.usize(f.n_estimators);
            p.usize(f.n_features);
            p.usize(f.feature_subset_size);
            p.u64(f.max_depth.map_or(u64::MAX, |d| d as u64));
            p.u8(u8::from(f.bootstrap));
            w.section(SECTION_FOREST_PARAMS, p);
            let mut t = Writer(Vec::new());
            t.usize(f.trees.len());
            for tree in &f.trees {
                write_tree(&mut t, tree);
            }
            w.section(SECTION_FOREST_TREES, t);
        }
        Classifier::ConvNet(m) => {
            let a = &m.arch;
            let mut p = Writer(Vec::new());
            for v in [
                a.input_len,
                a.filters,
                a.kernel,
                a.hidden[0],
                a.hidden[1],
                a.hidden[2],
            ] {
                p.usize(v);
            }
            for v in [
                a.dropout[0],
                a.dropout[1],
                a.dropout[2],
                a.bn_epsilon,
                a.bn_momentum,
            ] {
                p.f64(v);
            }
            w.section(SECTION_CONVNET_ARCH, p);
            let mut t = Writer(Vec::new());
            let tensors = m.tensors();
            t.usize(tensors.len());
            for (dims, data) in tensors {
                write_tensor(&mut t, &dims, data);
            }
            w.section(SECTION_CONVNET_TENSORS, t);
        }
    }
    if let Some(s) = &model.standardizer {
        let mut p = Writer(Vec::new());
        p.usize(s.fitted_on);
        p.u64(s.schema_hash);
        p.usize(FEATURE_COUNT);
        s.means.iter().for_each(|&v| p.f64(v));
        s.stds.iter().for_each(|&v| p.f64(v));
        w.section(SECTION_STANDARDIZER, p);
    }
    w.0
}

struct Header {
    kind: ModelKind,
    schema_hash: u64,
    seed: u64,
    threshold: f64,
    trained_at: i64,
}

fn read_header(r: &mut Reader) -> Result<Header> {
    let magic = r
        .take(4)
        .map_err(|_| Error::Format("file too short for a model container".into()))?;
    if magic != MAGIC {
        return Err(Error::Format(
            "not a model container (bad magic bytes)".into(),
        ));
    }
    let version = r.u16()?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported container version {version} (this build reads {FORMAT_VERSION})"
        )));
    }
    let kind = match r.u8()? {
        1 => ModelKind::Forest,
        2 => ModelKind::ConvNet,
        k => return Err(Error::Format(format!("unknown model kind {k}"))),
    };
    Ok(Header {
        kind,
        schema_hash: r.u64()?,
        seed: r.u64()?,
        threshold: r.f64()?,
        trained_at: r.i64()?,
    })
}

fn read_forest(h: &Header, params: &[u8], trees: &[u8]) -> Result<ForestModel> {
    let mut r = Reader::new(params);
    let n_estimators = r.usize()?;
    let n_features = r.usize()?;
    let feature_subset_size = r.usize()?;
    let max_depth = match r.u64()? {
        u64::MAX => None,
        d => Some(d as usize),
    };
    let bootstrap = match r.u8()? {
        0 => false,
        1 => true,
        b => return Err(Error::Integrity(format!("bad bootstrap flag {b}"))),
    };
    r.finish("forest parameters")?;

    let mut r = Reader::new(trees);
    let count = r.count()?;
    let trees = (0..count)
        .map(|_| read_tree(&mut r, n_features, 0))
        .collect::<Result<Vec<_>>>()?;
    r.finish("forest trees")?;
    if trees.is_empty() {
        return Err(Error::Integrity("forest without trees".into()));
    }
    Ok(ForestModel {
        trees,
        n_estimators,
        n_features,
        feature_subset_size,
        max_depth,
        bootstrap,
        seed: h.seed,
        schema_hash: h.schema_hash,
        threshold: h.threshold,
    })
}

fn read_convnet(h: &Header, arch: &[u8], tensors: &[u8]) -> Result<ConvNetModel> {
    let mut r = Reader::new(arch);
    let mut sizes = [0usize; 6];
    for s in &mut sizes {
        *s = r.usize()?;
    }
    let mut rates = [0f64; 5];
    for v in &mut rates {
        *v = r.f64()?;
    }
    r.finish("network architecture")?;
    let arch = Architecture {
        input_len: sizes[0],
        filters: sizes[1],
        kernel: sizes[2],
        hidden: [sizes[3], sizes[4], sizes[5]],
        dropout: [rates[0], rates[1], rates[2]],
        bn_epsilon: rates[3],
        bn_momentum: rates[4],
    };
    arch.validate()
        .map_err(|e| Error::Integrity(e.to_string()))?;

    let mut r = Reader::new(tensors);
    if r.count()? != 14 {
        return Err(Error::Integrity("expected 14 network tensors".into()));
    }
    let f = arch.filters;
    let mat = |r: &mut Reader, dims: &[usize], shape: (usize, usize)| -> Result<Array2<f64>> {
        Ok(Array2::from_shape_vec(shape, read_tensor(r, dims)?).expect("length checked"))
    };
    let vec = |r: &mut Reader, n: usize| -> Result<Array1<f64>> {
        Ok(Array1::from(read_tensor(r, &[n])?))
    };
    let conv_weights = mat(&mut r, &[arch.kernel, 1, f], (arch.kernel, f))?;
    let conv_bias = vec(&mut r, f)?;
    let bn_gamma = vec(&mut r, f)?;
    let bn_beta = vec(&mut r, f)?;
    let bn_running_mean = vec(&mut r, f)?;
    let bn_running_var = vec(&mut r, f)?;
    let widths = [
        arch.flat_len(),
        arch.hidden[0],
        arch.hidden[1],
        arch.hidden[2],
        1,
    ];
    let mut dense = Vec::with_capacity(4);
    for l in 0..4 {
        let (i, o) = (widths[l], widths[l + 1]);
        dense.push(Dense {
            weights: mat(&mut r, &[i, o], (i, o))?,
            bias: vec(&mut r, o)?,
        });
    }
    r.finish("network tensors")?;
    Ok(ConvNetModel {
        arch,
        conv_weights,
        conv_bias,
        bn_gamma,
        bn_beta,
        bn_running_mean,
        bn_running_var,
        dense: dense.try_into().expect("four layers"),
        threshold: h.threshold,
        seed: h.seed,
        schema_hash: h.schema_hash,
    })
}

fn read_standardizer(payload: &[u8]) -> Result<StandardizerState> {
    let mut r = Reader::new(payload);
    let fitted_on = r.usize()?;
    let schema_hash = r.u64()?;
    if r.usize()? != FEATURE_COUNT {
        return Err(Error::Integrity(
            "standardizer width differs from the feature count".into(),
        ));
    }
    let means = r.f64s(FEATURE_COUNT)?.try_into().unwrap();
    let stds = r.f64s(FEATURE_COUNT)?.try_into().unwrap();
    r.finish("standardizer")?;
    Ok(StandardizerState {
        means,
        stds,
        fitted_on,
        schema_hash,
    })
}

/// Parse container bytes. Nothing is returned unless every section checks out.
pub fn model_from_bytes(bytes: &[u8]) -> Result<ModelFile> {
    let mut r = Reader::new(bytes);
    let header = read_header(&mut r)?;
    let mut sections: Vec<(u8, &[u8])> = Vec::new();
    while r.pos < bytes.len() {
        let id = r.u8()?;
        let len = r.u64()?;
        let remaining = (bytes.len() - r.pos) as u64;
        if len > remaining {
            return Err(Error::Integrity(format!(
                "section {id} claims {len} bytes but only {remaining} remain"
            )));
        }
        if sections.iter().any(|(s, _)| *s == id) {
            return Err(Error::Integrity(format!("duplicate section {id}")));
        }
        sections.push((id, r.take(len as usize)?));
    }
    let section = |id: u8| -> Result<&[u8]> {
        sections
            .iter()
            .find(|(s, _)| *s == id)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::Integrity(format!("missing section {id}")))
    };
    let classifier = match header.kind {
        ModelKind::Forest => Classifier::Forest(read_forest(
            &header,
            section(SECTION_FOREST_PARAMS)?,
            section(SECTION_FOREST_TREES)?,
        )?),
        ModelKind::ConvNet => Classifier::ConvNet(read_convnet(
            &header,
            section(SECTION_CONVNET_ARCH)?,
            section(SECTION_CONVNET_TENSORS)?,
        )?),
    };
    let standardizer = match section(SECTION_STANDARDIZER) {
        Ok(p) => Some(read_standardizer(p)?),
        Err(_) => None,
    };
    Ok(ModelFile {
        classifier,
        standardizer,
        trained_at: header.trained_at,
    })
}

pub fn write_model(model: &ModelFile, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_bytes(model)).map_err(|e| Error::io(path, e))
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    model_from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::schema_hash;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn stump_forest() -> ModelFile {
        let forest = ForestModel {
            trees: vec![TreeNode::split(
                3,
                0.25,
                TreeNode::leaf(5, 1),
                TreeNode::leaf(0, 4),
            )],
            n_estimators: 1,
            n_features: FEATURE_COUNT,
            feature_subset_size: 9,
            max_depth: Some(1),
            bootstrap: true,
            seed: 42,
            schema_hash: schema_hash(),
            threshold: 0.5,
        };
        let standardizer = StandardizerState {
            means: std::array::from_fn(|i| i as f64 * 0.1),
            stds: std::array::from_fn(|i| 1.0 + i as f64),
            fitted_on: 10,
            schema_hash: schema_hash(),
        };
        ModelFile::new(Classifier::Forest(forest), Some(standardizer))
    }

    fn random_vectors(n: usize, width: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        (0..n)
            .map(|_| (0..width).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect()
    }

    #[test]
    fn forest_round_trip() {
        let model = stump_forest();
        let bytes = model_to_bytes(&model);
        assert_eq!(&bytes[..4], b"SDML");
        assert_eq!(bytes[6], 1);
        let back = model_from_bytes(&bytes).unwrap();
        assert_eq!(back, model);
        let (Classifier::Forest(a), Classifier::Forest(b)) = (&model.classifier, &back.classifier)
        else {
            panic!("kind changed");
        };
        for x in random_vectors(10, FEATURE_COUNT) {
            assert_eq!(a.predict_proba(&x).to_bits(), b.predict_proba(&x).to_bits());
        }
        assert_eq!(model_to_bytes(&back), bytes);
    }

    #[test]
    fn convnet_round_trip() {
        let net = ConvNetModel::build(42);
        let model = ModelFile {
            trained_at: 1_700_000_000,
            ..ModelFile::new(Classifier::ConvNet(net.clone()), None)
        };
        let back = model_from_bytes(&model_to_bytes(&model)).unwrap();
        assert_eq!(back, model);
        let Classifier::ConvNet(other) = &back.classifier else {
            panic!("kind changed")
        };
        for x in random_vectors(5, FEATURE_COUNT) {
            assert_eq!(
                net.predict_proba(&x).unwrap().to_bits(),
                other.predict_proba(&x).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn corrupted_section_length_is_an_integrity_error() {
        let bytes = model_to_bytes(&stump_forest());
        let header = 4 + 2 + 1 + 8 + 8 + 8 + 8;
        for (offset, value) in [(header + 1, 0xFF), (header + 1, 0x02), (header + 8, 0x7F)] {
            let mut bad = bytes.clone();
            bad[offset] ^= value;
            assert!(
                matches!(model_from_bytes(&bad), Err(Error::Integrity(_))),
                "offset {offset}"
            );
        }
        for cut in [bytes.len() - 1, header + 3, header + 20] {
            assert!(
                matches!(model_from_bytes(&bytes[..cut]), Err(Error::Integrity(_))),
                "cut {cut}"
            );
        }
    }

    #[test]
    fn bad_magic_and_version_are_format_errors() {
        let mut bytes = model_to_bytes(&stump_forest());
        bytes[0] = b'X';
        assert!(matches!(model_from_bytes(&bytes), Err(Error::Format(_))));
        let mut bytes = model_to_bytes(&stump_forest());
        bytes[4] = 9;
        assert!(matches!(model_from_bytes(&bytes), Err(Error::Format(_))));
        assert!(matches!(model_from_bytes(b"SD"), Err(Error::Format(_))));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.sdml");
        let model = stump_forest();
        write_model(&model, &path).unwrap();
        assert_eq!(read_model(&path).unwrap(), model);
        assert!(matches!(
            read_model(&dir.path().join("absent")),
            Err(Error::Io { .. })
        ));
    }
}

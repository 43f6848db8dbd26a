import numpy as np
import pytest

import pyroclass as pc


def test_kernels_and_gram():
    x = np.array([1.0, 2.0])
    z = np.array([3.0, 4.0])
    assert pc.kernel_eval(pc.LinearKernel(), x, z) == 11.0
    assert pc.kernel_eval(pc.PolynomialKernel(1.0, 2), x, z) == 144.0
    g = pc.gram(pc.GaussianKernel(0.5), np.random.default_rng(0).random((5, 3)))
    assert g.shape == (5, 5)
    assert np.all(np.diag(g) == 1.0)
    assert np.array_equal(g, g.T)
    with pytest.raises(pc.ConfigError):
        pc.gram(pc.GaussianKernel(0.0), np.zeros((2, 2)))


def test_svm_toy_problem(tmp_path):
    cfg = pc.SvmConfig()
    cfg.kernel = pc.LinearKernel()
    cfg.C = 100.0
    model = pc.train_svm(np.array([[0.0], [1.0]]), np.array([-1, 1], dtype=np.int8), cfg)
    assert model.decision_function(np.array([[0.5]]))[0] == pytest.approx(0.0, abs=1e-6)
    assert model.bias == pytest.approx(-1.0, abs=1e-6)
    assert model.meta.converged
    path = tmp_path / "toy.svmm"
    model.save(path)
    back = pc.load_svm_model(path)
    assert back.dual_coefs == model.dual_coefs


def test_svm_single_class_raises():
    with pytest.raises(pc.SingleClassError):
        pc.train_svm(np.zeros((3, 2)), np.ones(3, dtype=np.int8), pc.SvmConfig())


def test_logreg_and_metrics():
    X = np.array([[0.0], [0.1], [0.9], [1.0]])
    y = np.array([-1, -1, 1, 1], dtype=np.int8)
    cfg = pc.LogRegConfig()
    cfg.learning_rate = 1.0
    cfg.iterations = 3000
    model = pc.train_logreg(X, y, cfg)
    pred = model.predict(X)
    assert np.array_equal(pred, y)
    cm = pc.confusion(y, pred)
    assert str(cm) == "[[2, 0], [0, 2]]"
    assert pc.accuracy(cm) == 1.0
    assert pc.fpr(cm) == 0.0
    curve = pc.roc_from_scores(y, model.decision_function(X))
    assert pc.auc(curve) == 1.0


def test_undefined_rate_is_none():
    y = np.array([-1, -1], dtype=np.int8)
    assert pc.tpr(pc.confusion(y, y)) is None


def test_folds_and_images(tmp_path):
    folds = pc.kfold_split(10, 4, 0)
    assert sorted(np.bincount(folds)) == [2, 2, 3, 3]
    assert pc.kfold_split(10, 4, 0) == folds

    img = np.zeros((1, 2, 3), dtype=np.uint8)
    img[0, 1] = 255
    wide = pc.resize_bilinear(img, 4, 1)
    assert wide[0, :, 0].tolist() == [0, 64, 191, 255]
    assert np.array_equal(pc.flip_horizontal(pc.flip_horizontal(wide)), wide)
    assert np.array_equal(pc.median_blur(img, 3).shape, img.shape)

    pc.save_png(wide, tmp_path / "w.png")
    assert np.array_equal(pc.load_image(tmp_path / "w.png"), wide)


def test_dataset_round_trip(tmp_path):
    X = np.random.default_rng(1).random((4, 3))
    y = np.array([1, -1, 1, -1], dtype=np.int8)
    pc.save_dataset(X, y, tmp_path / "d.ffds", resolution=0)
    X2, y2, res = pc.load_dataset(tmp_path / "d.ffds")
    assert np.array_equal(X, X2)
    assert np.array_equal(y, y2)
    assert res == 0
    with pytest.raises(pc.DataError):
        pc.save_dataset(X * 2.0, y, tmp_path / "bad.ffds")


def test_config_keyword_constructors():
    cfg = pc.SvmConfig(kernel=pc.LinearKernel(), C=5.0, kkt_tol=1e-6)
    assert cfg.C == 5.0 and cfg.kkt_tol == 1e-6
    assert pc.describe_kernel(cfg.kernel) == "linear"
    assert pc.SvmConfig().C == 1.0
    lr = pc.LogRegConfig(learning_rate=0.05, iterations=10, lambda_=0.0)
    assert (lr.learning_rate, lr.iterations, lr.lambda_) == (0.05, 10, 0.0)

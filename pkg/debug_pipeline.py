import sys
import os

# Add current directory to path
sys.path.append(os.getcwd())

from dist import classify
from ideal import degree_histogram, format_histogram
from indep import model_markov_basis
from services.loaders import load_distribution, load_model


def test_pipeline(model_path="data/fourcycle.model", dist_path=None):
    print(f"🔬 Testing Toric Pipeline for {model_path}...")

    # 1. Model
    print("\n🧮 Loading Model...")
    try:
        spec = load_model(model_path)
        A = spec.matrix()
        print(f"✅ Model Success: m={A.m}, d={A.d}, graph={spec.is_graphical}")
    except Exception as e:
        print(f"❌ Model Exception: {e}")
        return

    # 2. Markov basis
    print("\n🔗 Computing Markov Basis...")
    try:
        basis = model_markov_basis(spec)
        print(f"✅ Markov Basis Success: {len(basis)} generators, {format_histogram(degree_histogram(basis)) or 'empty'}")
    except Exception as e:
        print(f"❌ Markov Basis Exception: {e}")
        return

    # 3. Verdict
    if dist_path:
        print("\n⚖️ Classifying Distribution...")
        try:
            P = load_distribution(dist_path, spec.space)
            verdict = classify(P, A, basis)
            print(f"✅ Classify Success: {verdict.status.value} (support={len(verdict.support)}, nice={verdict.nice})")
        except Exception as e:
            print(f"❌ Classify Exception: {e}")


if __name__ == "__main__":
    model_path = sys.argv[1] if len(sys.argv) > 1 else "data/fourcycle.model"
    dist_path = sys.argv[2] if len(sys.argv) > 2 else None

    test_pipeline(model_path, dist_path)

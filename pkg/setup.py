try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup
from os import path

this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, "README.md"), encoding="utf-8") as f:
    long_description = f.read()


setup(
    name="SignatureVAE",
    version="0.1.0",
    description="One-class signature forgery detection with beta-VAEs",
    license="BSD",
    packages=[
        "SignatureVAE",
        "SignatureVAE.diagnostics",
        "SignatureVAE.image",
        "SignatureVAE.learning",
        "SignatureVAE.learning.vae",
        "SignatureVAE.model_systems",
        "SignatureVAE.optimizer",
        "SignatureVAE.utils",
    ],
    install_requires=[
        "numpy",
        "matplotlib",
        "scipy",
        "scikit-learn>=0.24.2",
        "joblib",
        "pyYAML",
    ],
    extras_require={
        "pinned": [
            "joblib==1.4.2",
            "matplotlib==3.8.4",
            "numpy==1.26.4",
            "pyYAML==6.0.1",
            "scikit-learn==1.4.2",
            "scipy==1.13.0",
        ]
    },
    entry_points={
        "console_scripts": ["sigvae=SignatureVAE.cli:main"],
    },
    long_description=long_description,
    long_description_content_type="text/markdown",
    include_package_data=True,
)

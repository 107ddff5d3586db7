from setuptools import setup, find_packages

setup(
    name="sirsnet",
    version="1.0.0",
    description="Épidémies SIRS et SIV sur graphes : chaîne exacte, champ moyen, seuils spectraux et Monte Carlo",
    long_description=open("README.md", encoding="utf-8").read(),
    long_description_content_type="text/markdown",
    author="SirsNet Team",
    packages=find_packages(include=["sirsnet", "sirsnet.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",

    # Point d'entrée pour la CLI
    entry_points={
        'console_scripts': [
            'sirsnet=sirsnet.cli.cli:cli_main',
        ],
    },

    install_requires=[
        # CLI et console
        'typer>=0.9.0,<0.26',
        'rich>=13.0.0',
        'click>=8.0.0',
        'psutil>=5.9.0',
        # Configuration et schémas
        'pydantic>=2.0.0',
        'pydantic-settings>=2.0.0',
        'python-dotenv>=1.0.0',
        # Calcul
        'numpy>=1.24.0',
        'scipy>=1.10.0',
        'networkx>=3.0',
        # Visualisation
        'matplotlib>=3.8.0',
    ],

    extras_require={
        'dev': [
            'pytest>=7.0.0',
            'black>=22.0.0',
            'flake8>=4.0.0',
        ],
    },

    include_package_data=True,
    zip_safe=False,
)

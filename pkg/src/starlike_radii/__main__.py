from starlike_radii.cli import run

if __name__ == "__main__":
    run()

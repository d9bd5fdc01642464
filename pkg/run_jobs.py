from SkewHopf.jobs import run

if __name__ == '__main__':
    run.main()
